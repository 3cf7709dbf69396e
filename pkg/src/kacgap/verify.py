"""One-shot verification: replay every published numeric claim.

Each row re-derives one claim with its stated tolerance and reports
pass / fail / documented-discrepancy.  A documented-discrepancy row
records a printed value that disagrees with exact arithmetic (the
discrepancy is the finding, re-derived on every run); such rows do not
fail the build.  The overall verdict fails only on genuine check
failures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import gapbounds, kspectrum, montecarlo
from .jacobi import JacobiParams, norm_sq_ratio
from .kspectrum import audit_identities, kappa, kappa_column, mod3_monotonicity_check

PASS = "pass"
FAIL = "fail"
DOCUMENTED = "documented-discrepancy"

# published per-sector table for the small angular indices:
# (block, remainder, largest tail kappa, bound); decimals are close
# upper bounds, fractions exact
APPENDIX_TABLE = {
    0: (1.0412, Fraction(-57, 224), Fraction(1, 10), 0.694),
    1: (0.946, -0.2729, Fraction(1, 8), 0.7052),
    2: (0.895, -0.2084, 0.12, 0.669),
    3: (0.81, -0.254, 0.105, 0.667),
    4: (0.784, -0.2275, 0.12, 0.6671),
    5: (0.754, -0.206, 0.1, 0.6403),
}


@dataclass(frozen=True)
class VerifyRow:
    name: str
    claim: str
    expected: str
    computed: str
    tolerance: str
    status: str
    statistical: bool = False


@dataclass(frozen=True)
class VerifyReport:
    rows: tuple[VerifyRow, ...]

    @property
    def verdict(self) -> str:
        return PASS if all(r.status != FAIL for r in self.rows) else FAIL

    def row(self, name: str) -> VerifyRow:
        for r in self.rows:
            if r.name == name:
                return r
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "rows": [vars(r) for r in self.rows],
        }

    def to_text(self) -> str:
        headers = ("status", "name", "expected", "computed", "tolerance")
        table = [headers]
        for r in self.rows:
            status = r.status + (" (statistical)" if r.statistical else "")
            table.append((status, r.name, r.expected, r.computed, r.tolerance))
        widths = [max(len(row[i]) for row in table) for i in range(len(headers))]
        lines = []
        for j, row in enumerate(table):
            lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
            if j == 0:
                lines.append("  ".join("-" * w for w in widths))
        lines.append("")
        lines.append(f"overall verdict: {self.verdict}")
        return "\n".join(lines)


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _row(name, claim, expected, computed, tolerance, ok, documented=False, statistical=False):
    if documented:
        status = DOCUMENTED
    else:
        status = PASS if ok else FAIL
    return VerifyRow(name, claim, _fmt(expected), _fmt(computed), tolerance, status, statistical)


def _jacobi_rows() -> list:
    rows = []
    ratio = norm_sq_ratio(JacobiParams.for_sector(0), 1)
    rows.append(
        _row(
            "norm-ratio-l0-n1",
            "consecutive norm ratio at l=0, n=1 equals 16/9",
            float(Fraction(16, 9)),
            ratio,
            "1e-12",
            abs(ratio - 16.0 / 9.0) <= 1e-12,
        )
    )
    return rows


def _kspectrum_rows() -> list:
    rows = []
    k01, k10 = kappa(0, 1), kappa(1, 0)
    rows.append(
        _row(
            "kappa-0-1",
            "mode (0,1) carries eigenvalue -1/2",
            -0.5, k01, "1e-14", abs(k01 + 0.5) <= 1e-14,
        )
    )
    rows.append(
        _row(
            "kappa-1-0",
            "mode (1,0) carries eigenvalue -1/2",
            -0.5, k10, "1e-14", abs(k10 + 0.5) <= 1e-14,
        )
    )

    table = kspectrum.kappa_table(300, 70)
    vals = table.values.copy()
    vals[0, 0] = 0.0  # drop kappa_{0,0} = 1
    vals[1, 0] = 0.0  # drop the two -1/2 modes
    vals[0, 1] = 0.0
    i = int(np.argmin(vals))
    ell_min, n_min = divmod(i, vals.shape[1])
    vmin = float(vals[ell_min, n_min])
    rows.append(
        _row(
            "grid-min",
            "most negative eigenvalue after the -1/2 pair is -3/8 at (1,2)",
            -0.375,
            vmin,
            "1e-12, location exact",
            abs(vmin + 0.375) <= 1e-12 and (n_min, ell_min) == (1, 2),
        )
    )
    abs_vals = np.abs(table.values)
    abs_vals[0, 0] = 0.0
    rows.append(
        _row(
            "spectral-range",
            "every eigenvalue except kappa_{0,0}=1 lies in [-1/2, 1/2]",
            "<= 0.5",
            float(abs_vals.max()),
            "1e-12",
            float(abs_vals.max()) <= 0.5 + 1e-12,
        )
    )
    dom = float((np.abs(table.values) - table.hat).max())
    rows.append(
        _row(
            "hat-dominance",
            "|kappa| <= kappa_hat on n <= 300, l <= 70",
            "<= 0",
            dom,
            "1e-12",
            dom <= 1e-12,
        )
    )

    m5 = mod3_monotonicity_check(5, 100, 300)
    rows.append(
        _row(
            "mod3-l5",
            "the three residue subsequences at l=5 are monotone on [100,300]",
            "monotone x3",
            "/".join(r.verdict for r in m5),
            "0 sign flips",
            all(r.verdict == "monotone" for r in m5),
        )
    )
    m15 = mod3_monotonicity_check(15, 100, 300)
    rows.append(
        _row(
            "mod3-l15",
            "published figure caption claims all three residue subsequences "
            "at l=15 are monotone on [100,300]; residue 1 has a genuine "
            "turning point near n=180",
            "monotone x3 as printed",
            "/".join(f"{r.residue}:{r.verdict}" for r in m15),
            "0 sign flips",
            False,
            documented=True,
        )
    )
    return rows


def _audit_rows() -> list:
    report = audit_identities()
    rows = []
    documented = {
        "ell0-closed-form-printed": "printed l=0 closed form (-1)^n sin(n pi/3)/(n+1) "
        "disagrees with the oracle (already at n=1: 0.433 vs -0.5)",
        "ell-recurrence-printed": "printed l-recurrence disagrees with the oracle "
        "(at (0,1) it yields -5/4 vs -1/2)",
        "ell2-expansion-printed": "printed l=2 expansion disagrees with the oracle "
        "(at n=0: 0.75 vs 0.25; its middle coefficient should be 2)",
    }
    for e in report.entries:
        if e.name in documented:
            rows.append(
                _row(
                    f"audit-{e.name}",
                    documented[e.name],
                    "measured discrepancy > 1e-10",
                    e.max_discrepancy,
                    f"audited on {e.index_range}",
                    False,
                    documented=True,
                )
            )
        else:
            rows.append(
                _row(
                    f"audit-{e.name}",
                    f"identity {e.name} consistent with the oracle",
                    "<= 1e-10",
                    e.max_discrepancy,
                    f"audited on {e.index_range}",
                    e.verdict == "consistent",
                )
            )
    return rows


def _gapbound_rows() -> tuple:
    rows = []

    printed_t = gapbounds.antisym_bound(0.943)
    rows.append(
        _row(
            "antisym-printed-t",
            "published: the split at t = 0.943 yields at most 0.729; exact "
            "evaluation gives 11/(16*0.943) = 0.72905620...",
            "<= 0.729",
            printed_t,
            "1e-6",
            printed_t <= 0.729 + 1e-6,
            documented=True,
        )
    )
    t_star, opt = gapbounds.antisym_optimize()
    rows.append(
        _row(
            "antisym-optimized",
            "balanced split: t* in [0.9430, 0.9437] and bound at most 0.729",
            "t* ~ 0.94338, bound <= 0.729",
            f"t*={t_star:.6f}, bound={opt:.12g}",
            "1e-9",
            0.9430 <= t_star <= 0.9437 and opt <= 0.729 + 1e-9,
        )
    )

    large = gapbounds.large_ell_bound(70)
    ev = large.evidence
    rows.append(
        _row(
            "large-l70-branch-a",
            "at l=70 the supremum of (1-a~)(1+2k~) sits at n=66, below 1.4351",
            "n=66, <= 1.4351",
            f"n={ev['sup_a_at']}, {ev['sup_a']:.12g}",
            "1e-6, location exact",
            ev["sup_a_at"] == 66 and ev["sup_a"] <= 1.4351 + 1e-6,
        )
    )
    rows.append(
        _row(
            "large-l70-branch-b-value",
            "at l=70 the supremum of 2 b~ (1+2k~) is no more than 1.4855",
            "<= 1.4855",
            ev["sup_b"],
            "1e-6",
            ev["sup_b"] <= 1.4855 + 1e-6,
        )
    )
    rows.append(
        _row(
            "large-l70-branch-b-location",
            "published location n=53 for the 2 b~ (1+2k~) supremum at l=70; "
            "the scan finds the maximum at n=64 (the printed value cap holds)",
            "n=53 as printed",
            f"n={ev['sup_b_at']}",
            "location exact",
            ev["sup_b_at"] == 53,
            documented=True,
        )
    )
    rows.append(
        _row(
            "large-l70-bound",
            "the l=70 sector bound is at most 0.73016",
            "<= 0.73016",
            large.lambda_bound,
            "1e-9",
            large.lambda_bound <= 0.73016 + 1e-9,
        )
    )
    fam = gapbounds.large_ell_sector()
    lams = fam.evidence["bounds"]
    rows.append(
        _row(
            "large-l-monotone",
            "per-l bounds are non-increasing along l = 70, 100, 150, 200",
            "non-increasing",
            "/".join(f"{v:.6f}" for v in lams),
            "exact ordering",
            all(lams[i + 1] <= lams[i] for i in range(len(lams) - 1)),
        )
    )

    mid = gapbounds.mid_ell_check()
    rows.append(
        _row(
            "mid-l-scan",
            "oracle scan over l in [6,69], n in [0,151] stays at or below "
            "0.23 in absolute value, giving the sector bound 0.73 (scan "
            "range extends the published 6..50 numeric check to 69)",
            "max |kappa| <= 0.23, bound 0.73",
            f"max={mid.evidence['max_abs_kappa']:.12g} at "
            f"{mid.evidence['argmax']}, bound={mid.lambda_bound:.12g}",
            "exact comparisons",
            mid.evidence["max_abs_kappa"] <= 0.23 and mid.lambda_bound == 0.73,
        )
    )

    # small-l block pipeline, l = 0 (published fractions are exact)
    diag, off = gapbounds.build_Z_fractions(5)
    want_diag = [Fraction(1, 2), Fraction(3, 4), Fraction(3, 10), Fraction(1, 2), Fraction(9, 14)]
    want_off = [Fraction(-5, 16), Fraction(-21, 80), Fraction(-1, 5), Fraction(-2, 7)]
    rows.append(
        _row(
            "small-l0-block-entries",
            "the displayed 5x5 block matches entry by entry as exact rationals",
            "diag (1/2, 3/4, 3/10, 1/2, 9/14); off (-5/16, -21/80, -1/5, -2/7)",
            "exact match" if (diag == want_diag and off == want_off) else f"{diag}, {off}",
            "exact rational equality",
            diag == want_diag and off == want_off,
        )
    )
    small0 = gapbounds.small_ell_bound(0)
    ev0 = small0.evidence
    block_ok = ev0["block_top"] < 1.0412
    rem_ok = abs(ev0["remainder"] - float(Fraction(-57, 224))) <= 1e-12
    tail_ok = abs(ev0["tail_kappa"] - 0.1) <= 1e-9
    two_ok = ev0["two_by_two"] <= 1.388
    final_ok = small0.lambda_bound <= 0.694
    rows.append(
        _row(
            "small-l0-pipeline",
            "l=0: block top < 1.0412, coupling -57/224, tail kappa 1/10, "
            "2x2 bound <= 1.388, sector bound <= 0.694",
            "(1.0412, -57/224, 1/10, 1.388, 0.694)",
            f"({ev0['block_top']:.6f}, {ev0['remainder']:.6f}, "
            f"{ev0['tail_kappa']:.6f}, {ev0['two_by_two']:.6f}, "
            f"{small0.lambda_bound:.6f})",
            "block/2x2/final one-sided, coupling 1e-12, tail 1e-9",
            block_ok and rem_ok and tail_ok and two_ok and final_ok,
        )
    )

    # published small-l table rows, reproduced under the shifted-index
    # pairing; printed decimals are close upper bounds, and the printed
    # bound column follows from the printed triple, so the computed
    # values must sit at or below the printed ones and the printed
    # arithmetic must be self-consistent
    for ell in range(1, 6):
        row = gapbounds.appendix_row(ell)
        p_block, p_rem, p_tail, p_bound = APPENDIX_TABLE[ell]
        block_ok = (
            row.block_top <= p_block + 1e-9 and p_block - row.block_top <= 0.002
        )
        rem_ok = abs(row.remainder - float(p_rem)) <= 0.002
        if isinstance(p_tail, Fraction):
            tail_ok = abs(row.tail_kappa - float(p_tail)) <= 1e-9
        else:
            tail_ok = row.tail_kappa <= p_tail + 1e-9
        printed_bound = 0.5 * gapbounds.two_by_two_top(
            p_block, float(p_rem), float(p_tail)
        )
        bound_ok = (
            row.bound <= p_bound + 1e-9 and abs(printed_bound - p_bound) <= 0.002
        )
        rows.append(
            _row(
                f"appendix-row-l{ell}",
                f"published table row l={ell} reproduced under the "
                "shifted-index pairing",
                f"({_fmt(float(p_block))}, {_fmt(float(p_rem))}, {_fmt(p_tail)}, {_fmt(float(p_bound))})",
                f"({row.block_top:.4f}, {row.remainder:.4f}, "
                f"{row.tail_kappa:.4f}, {row.bound:.4f})",
                "at or below printed; block within 0.002; printed 2x2 self-consistent",
                block_ok and rem_ok and tail_ok and bound_ok,
            )
        )
    rows.append(
        _row(
            "appendix-index-convention",
            "the published table rows for l = 1..5 only reproduce when the "
            "block's eigenvalue factors 1+2 kappa_{n,l} are paired with "
            "rows shifted by two (the l=0 convention applied verbatim); "
            "that pairing mispairs modes for l >= 1, so the assembled gap "
            "uses the sound pipeline instead",
            "published pairing",
            "shifted by two",
            "n/a",
            False,
            documented=True,
        )
    )

    # sound pipeline rows used in the assembled gap
    for ell in range(6):
        sb = gapbounds.small_ell_bound(ell)
        rows.append(
            _row(
                f"small-l{ell}-bound",
                f"sound small-sector bound at l={ell} stays below 3/4",
                "< 0.75",
                sb.lambda_bound,
                "strict",
                sb.lambda_bound < 0.75,
            )
        )

    report = gapbounds.assemble_gap_report()
    rows.append(
        _row(
            "gap-assembly",
            "worst sector bound mu3 is at most 0.73016 and the spectral gap "
            "3/4 - mu3 is at least 0.01984",
            "mu3 <= 0.73016, gap >= 0.01984",
            f"mu3={report.mu3:.12g}, gap={report.gap:.12g}",
            "1e-6 / one-sided",
            report.mu3 <= 0.73016 + 1e-6 and report.gap >= 0.01984,
        )
    )

    for N, alpha, want_c, want_gap in ((4, 2, Fraction(1, 9), Fraction(1, 18)), (4, 0, Fraction(1, 3), Fraction(1, 6))):
        r = gapbounds.entropy_production_constant(N, alpha)
        rows.append(
            _row(
                f"entropy-constant-{N}-{alpha}",
                f"entropy production constant for N={N}, alpha={alpha}",
                f"C={want_c}, gap >= {want_gap}",
                f"C={r.C}, gap >= {r.gap_bound}",
                "exact rational",
                r.C == want_c and r.gap_bound == want_gap and not r.degenerate,
            )
        )
    r32 = gapbounds.entropy_production_constant(3, 2)
    rows.append(
        _row(
            "entropy-constant-3-2",
            "the three-particle super-hard-sphere constant degenerates",
            "C=-1/2, degenerate",
            f"C={r32.C}, degenerate={r32.degenerate}",
            "exact rational",
            r32.C == Fraction(-1, 2) and r32.degenerate,
        )
    )
    return rows, report.gap


def _montecarlo_rows(seed: int, replicas: int, quick: bool, proven_gap: float) -> list:
    rows = []
    rows.append(
        _row(
            "equilibrium-constant",
            "equilibrium radial density prefactor 16/pi",
            5.09295817894,
            montecarlo.EQ_CONST,
            "1e-9",
            abs(montecarlo.EQ_CONST - 5.09295817894) <= 1e-9,
        )
    )

    rate_lo, rate_hi = (0.15, 0.5) if quick else (0.2, 0.45)
    ent_ceiling = 0.03 if quick else 0.01

    cfg = montecarlo.SimConfig(alpha=2, replicas=replicas, seed=seed, initial="linear")
    res = montecarlo.simulate(cfg)
    rows.append(
        _row(
            "mc-conservation",
            "momentum and energy invariants hold at every jump",
            "<= 1e-9",
            res.max_residual,
            "1e-9",
            res.max_residual <= 1e-9,
            statistical=True,
        )
    )
    hs = res.entropy["sampled"].values
    rows.append(
        _row(
            "mc-entropy-decay",
            "relative entropy at the last frame sits below the initial one",
            f"H({cfg.frames[-1]:g}) < H(0)",
            f"H(0)={hs[0]:.6f}, H({cfg.frames[-1]:g})={hs[-1]:.6f}",
            "strict",
            hs[-1] < hs[0],
            statistical=True,
        )
    )
    rows.append(
        _row(
            "mc-decay-rate",
            "fitted entropy decay rate for the super hard sphere start 2(1-x) "
            "(published estimate 0.3)",
            f"in [{rate_lo}, {rate_hi}]",
            res.rate if res.rate is not None else "none",
            "window",
            res.rate is not None and rate_lo <= res.rate <= rate_hi,
            statistical=True,
        )
    )
    rows.append(
        _row(
            "mc-rate-vs-gap",
            "half the fitted rate exceeds the proven gap",
            f"rate/2 > {proven_gap:.6g}",
            (res.rate / 2.0) if res.rate is not None else "none",
            "strict",
            res.rate is not None and res.rate / 2.0 > proven_gap,
            statistical=True,
        )
    )

    eq_cfg = montecarlo.SimConfig(alpha=2, replicas=replicas, seed=seed, initial="equilibrium")
    eq = montecarlo.simulate(eq_cfg)
    worst = max(max(s.values) for s in eq.entropy.values())
    rows.append(
        _row(
            "mc-stationarity",
            "starting from equilibrium, entropy stays at the binning noise floor",
            f"< {ent_ceiling}",
            worst,
            "all frames, all marginals",
            worst < ent_ceiling,
            statistical=True,
        )
    )
    return rows


def verify_all(seed: int = 0, quick: bool = False, replicas: int | None = None) -> VerifyReport:
    """Run every check; statistical rows use the fixed seed and replica
    count (1e5, or 1e4 with widened tolerances under quick)."""
    if replicas is None:
        replicas = 10_000 if quick else 100_000
    rows = []
    rows.extend(_jacobi_rows())
    rows.extend(_kspectrum_rows())
    rows.extend(_audit_rows())
    gap_rows, gap = _gapbound_rows()
    rows.extend(gap_rows)
    rows.extend(_montecarlo_rows(seed, replicas, quick, gap))
    return VerifyReport(tuple(rows))
