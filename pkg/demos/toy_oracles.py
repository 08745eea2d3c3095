"""Cross-check the fast coefficient engine against brute force in a toy regime.

The toy scenario stretches L0 until omega_1 T is about a thousand radians;
there the time-ordered integrals can be done the slow way.
"""

from lightclock import ScenarioConfig, validate


def main():
    rep = validate(ScenarioConfig())
    for c in rep.checks:
        print(f"{'ok  ' if c.passed else 'FAIL'} {c.name:32s} {c.value:.3e}  (tol {c.tolerance:g})")
    bad = validate(ScenarioConfig(), fault="coupling")
    print("with a corrupted coupling matrix:", "passes" if bad.passed else "fails as it should")


if __name__ == "__main__":
    main()
