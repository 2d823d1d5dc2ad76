"""Command-line front end.

Commands
--------
algebra-check    gamma-matrix identity suite (both signs)
geometry-check   chart oracles for every chart plus the reconciliation report
symmetry-check   determining equations and commutator certificates per set
separate         full pipeline: reduce -> integrate -> reconstruct -> verify
print-config     echo the effective configuration for a set

Configuration is a flat INI file (section headers, one ``key = value``
per line, arrays comma-separated); every value has an embedded default,
so ``print-config`` output is always a complete, re-runnable config.

Exit codes: 0 all checks passed, 1 a verification failed, 2 bad
configuration or domain error.
"""

from __future__ import annotations

import argparse
import configparser
import io
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import reconciliation
from .clifford import (EPS3, ETA, clifford_residual, commutator, levi_civita_tensor,
                       make_gamma_rep, raise_levi_civita, curved_gamma)
from .errors import ConfigError, DiracSepError
from .geometry import (all_charts, metric_compat_fd, metric_pullback, riemann_fd,
                       roundtrip_error, spinor_compat_residual, christoffel_fd)
from .reduction import integrate, reconstruct, reduce
from .separation import SET_IDS, get_set, make_potential
from .symmetry import (build_operator_pair, check_determining, commutator_residual,
                       gaussian_test_spinor, pair_commutator_residual)
from .verification import dirac_residual, eigen_residual, grid_points

_SET_LAMBDA_DEFAULTS = {
    "1": (2.0, 0.5), "2": (2.0, 0.5), "3": (2.0, 0.5), "4a": (2.0, 0.5),
    "4b": (2.0, 0.5), "5": (1.5, 2.0), "6": (2.0, 0.5), "7": (2.0, 0.5),
}


@dataclass
class RunConfig:
    """Everything one ``separate`` run needs, with reproducible defaults."""

    set_id: str = "1"
    a: float | None = None
    eps: int = 1
    s: int = 1
    m: float = 1.0
    lam1: float = 2.0
    lam2: float = 0.5
    profiles: tuple = ((), (), ())
    interval: tuple[float, float] | None = None  # None: derived from the box
    init: tuple = (1.0 + 0.0j, 0.3j)
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    fd_h: float = 1e-4
    grid_n: int = 11
    box: tuple | None = None                     # None: the set's safe box
    residual_tol: float = 1e-5
    eigen_tol: float = 1e-6
    seed: int = 12345
    out_dir: str = "out"
    extras: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.set_id not in SET_IDS and self.set_id != "4":
            raise ConfigError(f"set must be one of {SET_IDS}, got {self.set_id!r}")
        if self.s not in (1, -1):
            raise ConfigError("s must be +1 or -1")
        if self.m <= 0.0:
            raise ConfigError("mass m must be positive (massive case only)")
        if self.set_id == "6" and (self.a is None or self.a == 0.0):
            raise ConfigError("set 6 requires a nonzero parameter a "
                              "(add 'a = <value>' to [run])")

    def complete_set(self):
        return get_set(self.set_id, a=self.a, eps=self.eps)

    def to_ini(self) -> str:
        cp = configparser.ConfigParser()
        cp["run"] = {
            "set": self.set_id,
            "s": str(self.s),
            "m": repr(self.m),
            "lambda1": repr(self.lam1),
            "lambda2": repr(self.lam2),
            "eps": str(self.eps),
            "seed": str(self.seed),
        }
        if self.a is not None:
            cp["run"]["a"] = repr(self.a)
        cp["potential"] = {
            f"a{k}": ", ".join(f"{p}:{c!r}" for p, c in self.profiles[k]) or "0:0.0"
            for k in range(3)
        }
        cp["integrate"] = {
            "interval": ("auto" if self.interval is None
                         else f"{self.interval[0]!r}, {self.interval[1]!r}"),
            "init": ", ".join(repr(v) for z in self.init for v in (z.real, z.imag)),
            "rel_tol": repr(self.rel_tol),
            "abs_tol": repr(self.abs_tol),
        }
        cp["verify"] = {
            "h": repr(self.fd_h),
            "grid_n": str(self.grid_n),
            "box": ("auto" if self.box is None
                    else ", ".join(repr(v) for pair in self.box for v in pair)),
            "residual_tol": repr(self.residual_tol),
            "eigen_tol": repr(self.eigen_tol),
        }
        cp["output"] = {"dir": self.out_dir}
        buf = io.StringIO()
        cp.write(buf)
        return buf.getvalue()


def _parse_terms(text: str):
    text = text.strip()
    if not text or text == "0:0.0":
        return ()
    terms = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            p, c = item.split(":")
            terms.append((int(p), float(c)))
        except ValueError as exc:
            raise ConfigError(f"bad profile term {item!r}; expected power:coeff") from exc
    return tuple(terms)


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad float list {text!r}") from exc


def load_config(path: str | None, overrides: dict | None = None) -> RunConfig:
    cfg = RunConfig()
    cp = configparser.ConfigParser()
    if path is not None:
        read = cp.read(path)
        if not read:
            raise ConfigError(f"config file {path!r} not found")
    run = cp["run"] if cp.has_section("run") else {}
    overrides = overrides or {}

    set_id = str(overrides.get("set", run.get("set", cfg.set_id)))
    cfg.set_id = "4a" if set_id == "4" else set_id
    if "a" in run:
        cfg.a = float(run["a"])
    if overrides.get("a") is not None:
        cfg.a = float(overrides["a"])
    if cfg.a is None and cfg.set_id == "6":
        pass  # validate() reports the actionable error
    cfg.eps = int(run.get("eps", cfg.eps))
    cfg.s = int(run.get("s", cfg.s))
    cfg.m = float(run.get("m", cfg.m))
    lam_default = _SET_LAMBDA_DEFAULTS.get(cfg.set_id, (2.0, 0.5))
    cfg.lam1 = float(run.get("lambda1", lam_default[0]))
    cfg.lam2 = float(run.get("lambda2", lam_default[1]))
    cfg.seed = int(overrides.get("seed", run.get("seed", cfg.seed)))

    pot = cp["potential"] if cp.has_section("potential") else {}
    cfg.profiles = tuple(_parse_terms(pot.get(f"a{k}", "")) for k in range(3))

    section = cp["integrate"] if cp.has_section("integrate") else {}
    interval = section.get("interval", "auto").strip()
    if interval != "auto":
        vals = _parse_floats(interval)
        if len(vals) != 2:
            raise ConfigError("interval must be 'auto' or 'lo, hi'")
        cfg.interval = (vals[0], vals[1])
    init = _parse_floats(section.get("init", "1.0, 0.0, 0.0, 0.3"))
    if len(init) != 4:
        raise ConfigError("init must be four floats re1, im1, re2, im2")
    cfg.init = (init[0] + 1j * init[1], init[2] + 1j * init[3])
    cfg.rel_tol = float(section.get("rel_tol", cfg.rel_tol))
    cfg.abs_tol = float(section.get("abs_tol", cfg.abs_tol))

    ver = cp["verify"] if cp.has_section("verify") else {}
    cfg.fd_h = float(ver.get("h", cfg.fd_h))
    cfg.grid_n = int(ver.get("grid_n", cfg.grid_n))
    box = ver.get("box", "auto").strip()
    if box != "auto":
        vals = _parse_floats(box)
        if len(vals) != 6:
            raise ConfigError("box must be 'auto' or six floats lo0,hi0,lo1,hi1,lo2,hi2")
        cfg.box = tuple((vals[2 * k], vals[2 * k + 1]) for k in range(3))
    cfg.residual_tol = float(ver.get("residual_tol", cfg.residual_tol))
    cfg.eigen_tol = float(ver.get("eigen_tol", cfg.eigen_tol))

    out = cp["output"] if cp.has_section("output") else {}
    cfg.out_dir = str(overrides.get("out", out.get("dir", cfg.out_dir)))
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_algebra_check(signs=(1, -1), corrupt: bool = False, out=sys.stdout) -> int:
    """Gamma identity suite; returns the process exit code."""
    rng = np.random.default_rng(2024)
    eta_inv = np.linalg.inv(ETA)
    worst = 0.0
    for s in signs:
        rep = make_gamma_rep(s)
        gam = rep.gammas.copy()
        if corrupt:
            gam = gam + 1e-3  # deliberate defect, demonstrates detection
        res = clifford_residual(gam, eta_inv)
        print(f"s={s:+d} anticommutators: residual {res:.3e}", file=out)
        worst = max(worst, res)
        eps_up = raise_levi_civita(EPS3, eta_inv)
        glow = np.einsum("ab,bij->aij", ETA, gam)
        cres = 0.0
        for a in range(3):
            for b in range(3):
                dev = commutator(gam[a], gam[b]) \
                    + 2j * s * np.einsum("c,cij->ij", eps_up[a, b], glow)
                cres = max(cres, float(np.max(np.abs(dev))))
        print(f"s={s:+d} commutator identity: residual {cres:.3e}", file=out)
        worst = max(worst, cres)
        for chart in all_charts(a=0.7):
            chart_worst = 0.0
            ginvs = []
            for _ in range(20):
                u = np.array([rng.uniform(lo, hi) for lo, hi in chart.sample_box])
                gammas = curved_gamma(rep, chart, u)
                if corrupt:
                    gammas = gammas + 1e-3
                ginv = chart.metric_inv(u)
                chart_worst = max(chart_worst, clifford_residual(gammas, ginv))
                glow_u = np.einsum("ab,bij->aij", chart.metric(u), gammas)
                e_up = raise_levi_civita(levi_civita_tensor(chart, u), ginv)
                for mu in range(3):
                    for nu in range(3):
                        dev = commutator(gammas[mu], gammas[nu]) \
                            + 2j * s * np.einsum("c,cij->ij", e_up[mu, nu], glow_u)
                        chart_worst = max(chart_worst, float(np.max(np.abs(dev))))
            print(f"s={s:+d} {chart.chart_id}: curved identities residual "
                  f"{chart_worst:.3e}", file=out)
            worst = max(worst, chart_worst)
    ok = worst <= 1e-12
    print(f"algebra-check: {'pass' if ok else 'FAIL'} (worst {worst:.3e})", file=out)
    return 0 if ok else 1


def cmd_geometry_check(out=sys.stdout) -> int:
    rng = np.random.default_rng(99)
    rep = make_gamma_rep(1)
    failed = False
    for chart in all_charts(a=0.7):
        rt = tri = pb = cf = flat = compat = mc = 0.0
        for _ in range(12):
            u = np.array([rng.uniform(lo, hi) for lo, hi in chart.sample_box])
            rt = max(rt, roundtrip_error(chart, u))
            g = chart.metric(u)
            co = chart.coframe(u)
            tri = max(tri, float(np.max(np.abs(co.T @ ETA @ co - g))))
            pb = max(pb, float(np.max(np.abs(metric_pullback(chart, u) - g))))
            cf = max(cf, float(np.max(np.abs(chart.christoffel(u)
                                             - christoffel_fd(chart, u)))))
            flat = max(flat, float(np.max(np.abs(riemann_fd(chart, u, 1e-3)))))
            compat = max(compat, spinor_compat_residual(chart, u, rep))
            mc = max(mc, metric_compat_fd(chart, u))
        ok = (rt <= 1e-10 and tri <= 1e-12 and pb <= 1e-10 and flat <= 1e-5
              and compat <= 1e-8 and cf <= 1e-6 and mc <= 1e-6)
        failed |= not ok
        print(f"{chart.chart_id:16s} roundtrip={rt:.1e} triad={tri:.1e} "
              f"pullback={pb:.1e} christoffel={cf:.1e} flatness={flat:.1e} "
              f"spinor={compat:.1e} metric_compat={mc:.1e} "
              f"{'pass' if ok else 'FAIL'}", file=out)
    # spot values of the closed-form connections
    from .geometry import NullParabolicChart, NullProjectiveChart, PolarChart
    checks = [
        ("polar Gamma^r_phiphi(r=1.5)", PolarChart().christoffel([0.0, 1.5, 0.2])[1, 2, 2], -1.5),
        ("polar Gamma^phi_rphi(r=1.5)", PolarChart().christoffel([0.0, 1.5, 0.2])[2, 1, 2], 1 / 1.5),
        ("parabolic Gamma^0_22(a=0.7)", NullParabolicChart(0.7).christoffel([0.1, 0.2, 0.3])[0, 2, 2], -4 * 0.49),
        ("parabolic Gamma^1_20(a=0.7)", NullParabolicChart(0.7).christoffel([0.1, 0.2, 0.3])[1, 2, 0], -1 / 0.7),
        ("projective Gamma^1_22(u0=0.8)", NullProjectiveChart().christoffel([0.8, 0.0, 0.1])[1, 2, 2], 1.6),
        ("projective Gamma^2_20(u0=0.8)", NullProjectiveChart().christoffel([0.8, 0.0, 0.1])[2, 2, 0], 1.25),
    ]
    for label, got, want in checks:
        ok = abs(got - want) <= 1e-14
        failed |= not ok
        print(f"{label}: {got:.12g} (expected {want:.12g}) "
              f"{'pass' if ok else 'FAIL'}", file=out)
    print(file=out)
    print(reconciliation.render_report(), file=out)
    print(f"geometry-check: {'FAIL' if failed else 'pass'}", file=out)
    return 1 if failed else 0


def _random_admissible_profiles(cset, rng):
    profiles = []
    for _ in range(3):
        terms = [(int(p), round(float(rng.normal() * 0.3), 12))
                 for p in rng.integers(0, 3, size=2)]
        if cset.reduced_positive and rng.random() < 0.4:
            terms.append((-1, round(float(rng.normal() * 0.2), 12)))
        profiles.append(terms)
    return profiles


def cmd_symmetry_check(set_ids=None, n_potentials: int = 5, seed: int = 12345,
                       a: float = 0.7, out=sys.stdout) -> int:
    set_ids = list(set_ids or SET_IDS)
    failed = False
    for sid in set_ids:
        cset = get_set(sid, a=a)
        rng = np.random.default_rng(seed + 17 * SET_IDS.index(cset.set_id))
        worst_det = worst_comm = worst_pair = 0.0
        for k in range(n_potentials):
            pot = make_potential(cset, _random_admissible_profiles(cset, rng))
            x1, x2 = build_operator_pair(cset, pot, s=1)
            pts = cset.sample_cartesian(50, seed=seed + k)
            for op in (x1, x2):
                worst_det = max(worst_det,
                                check_determining(op, pot, pts).max_residual)
            psi = gaussian_test_spinor(seed=seed + k, center=pts.mean(axis=0))
            gpts = cset.sample_cartesian(6, seed=seed + 1000 + k)
            worst_comm = max(worst_comm,
                             commutator_residual(x1, pot, psi, gpts, h=1e-3),
                             commutator_residual(x2, pot, psi, gpts, h=1e-3))
            worst_pair = max(worst_pair,
                             pair_commutator_residual(x1, x2, pot, psi, gpts, h=1e-3))
        ok = worst_det <= 1e-6 and worst_comm <= 1e-4 and worst_pair <= 1e-4
        failed |= not ok
        print(f"set {cset.set_id:2s}: determining={worst_det:.2e} "
              f"commutator={worst_comm:.2e} pair={worst_pair:.2e} "
              f"{'pass' if ok else 'FAIL'}", file=out)
    print(f"symmetry-check: {'FAIL' if failed else 'pass'}", file=out)
    return 1 if failed else 0


def cmd_separate(cfg: RunConfig, out=sys.stdout) -> int:
    cset = cfg.complete_set()
    potential = make_potential(cset, cfg.profiles)
    ode = reduce(cset, potential, cfg.lam1, cfg.lam2, cfg.m, cfg.s)
    box = cfg.box or cset.cartesian_box
    if cfg.interval is not None:
        lo, hi = cfg.interval
    else:
        lo, hi = cset.reduced_range()
    traj = integrate(ode, lo, hi, np.array(cfg.init, dtype=complex),
                     rel_tol=cfg.rel_tol, abs_tol=cfg.abs_tol)
    fld = reconstruct(traj)
    grid = grid_points(box, cfg.grid_n)
    report = dirac_residual(fld, potential, grid, h=cfg.fd_h,
                            tol=cfg.residual_tol, box=box)
    x1, x2 = build_operator_pair(cset, potential, cfg.s)
    eig_grid = grid[:: max(1, len(grid) // 40)]
    e1 = eigen_residual(fld, x1, cfg.lam1, eig_grid, h=3e-5)
    e2 = eigen_residual(fld, x2, cfg.lam2, eig_grid, h=3e-5)

    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "trajectory.csv").write_text(traj.to_csv())
    vals = fld(grid)
    lines = ["x0,x1,x2,re_phi1,im_phi1,re_phi2,im_phi2"]
    for p, v in zip(grid, vals):
        lines.append("%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g"
                     % (p[0], p[1], p[2], v[0].real, v[0].imag, v[1].real, v[1].imag))
    (out_dir / "field.csv").write_text("\n".join(lines) + "\n")
    (out_dir / "residuals.csv").write_text(report.to_csv(grid))

    rep_lines = [f"set: {cset.set_id}", f"s: {cfg.s:+d}", f"m: {cfg.m!r}",
                 f"lambda1: {cfg.lam1!r}", f"lambda2: {cfg.lam2!r}",
                 f"interval: [{lo!r}, {hi!r}]",
                 f"integrator_steps: {traj.stats['steps']}",
                 f"integrator_rejected: {traj.stats['rejected']}",
                 f"integrator_nfev: {traj.stats['nfev']}",
                 report.render(),
                 f"eigen_residual_X1: {e1:.6e}",
                 f"eigen_residual_X2: {e2:.6e}",
                 f"eigen_tolerance: {cfg.eigen_tol:.3e}"]
    if cset.set_id in ("1", "2") and potential.is_zero:
        mu = np.linalg.eigvals(ode.matrix(0.0))
        ksq = float(np.mean((-mu ** 2).real))
        rep_lines.append(f"dispersion_k_squared: {ksq!r} "
                         f"(lambda1^2 - lambda2^2 - m^2 = "
                         f"{cfg.lam1 ** 2 - cfg.lam2 ** 2 - cfg.m ** 2!r})")
    ok = report.passed and e1 <= cfg.eigen_tol and e2 <= cfg.eigen_tol
    rep_lines.append(f"overall: {'pass' if ok else 'FAIL'}")
    text = "\n".join(rep_lines) + "\n"
    (out_dir / "report.txt").write_text(text)
    (out_dir / "config_echo.ini").write_text(cfg.to_ini())
    print(text, file=out)
    print(f"artifacts written to {out_dir}/", file=out)
    return 0 if ok else 1


def main(argv=None) -> int:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI config file")
    common.add_argument("--set", dest="set_id", help="complete set id (1..7, 4a, 4b)")
    common.add_argument("--seed", type=int, help="RNG seed override")
    common.add_argument("--out", help="output directory override")
    common.add_argument("--a", type=float, help="chart parameter a (set 6)")
    parser = argparse.ArgumentParser(
        prog="diracsep",
        description="Separation of variables for the (2+1)-dimensional Dirac "
                    "equation with external electromagnetic potentials.")
    sub = parser.add_subparsers(dest="command", required=True)
    p_alg = sub.add_parser("algebra-check", parents=[common])
    p_alg.add_argument("--corrupt-gamma", action="store_true",
                       help="perturb the matrices to demonstrate defect detection")
    p_alg.add_argument("--s", type=int, choices=(1, -1), help="restrict to one sign")
    sub.add_parser("geometry-check", parents=[common])
    p_sym = sub.add_parser("symmetry-check", parents=[common])
    p_sym.add_argument("--potentials", type=int, default=5,
                       help="random admissible potentials per set")
    sub.add_parser("separate", parents=[common])
    sub.add_parser("print-config", parents=[common])
    args = parser.parse_args(argv)

    overrides = {}
    if args.set_id:
        overrides["set"] = args.set_id
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.out:
        overrides["out"] = args.out
    if args.a is not None:
        overrides["a"] = args.a

    try:
        if args.command == "algebra-check":
            signs = (args.s,) if args.s else (1, -1)
            return cmd_algebra_check(signs=signs, corrupt=args.corrupt_gamma)
        if args.command == "geometry-check":
            return cmd_geometry_check()
        if args.command == "symmetry-check":
            sets = [overrides["set"]] if "set" in overrides else None
            cfg_seed = overrides.get("seed", 12345)
            return cmd_symmetry_check(set_ids=sets, n_potentials=args.potentials,
                                      seed=cfg_seed, a=overrides.get("a") or 0.7)
        cfg = load_config(args.config, overrides)
        if args.command == "print-config":
            print(cfg.to_ini(), end="")
            return 0
        return cmd_separate(cfg)
    except DiracSepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
