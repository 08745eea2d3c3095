"""Vary the Schwarzschild radius with the 110 m drop held fixed."""

from lightclock import ScenarioConfig, sweep_schwarzschild


def main():
    sw = sweep_schwarzschild(ScenarioConfig(workers=2))
    print(" r_s [m]     T [s]        F_cl              F_qu")
    for r in sw.rows:
        print(f"{r['r_s']:7.1f}  {r['T']:.5f}  {r['F_cl']:.10e}  {r['F_qu']:.5e}")
    print(f"F_qu slope {sw.fit_F_qu.slope:.4e} per m, R^2 {sw.fit_F_qu.r_squared:.8f}")
    # with the height fixed, g T^2 = 2 h, so the leading classical term is
    # -2h/(3 r_A) whatever r_s is; only tiny corrections remain
    print(f"F_cl slope {sw.fit_F_cl.slope:.4e} per m, R^2 {sw.fit_F_cl.r_squared:.8f}")


if __name__ == "__main__":
    main()
