"""Property suites: large seeded sweeps auditing the theorem claims.

Each suite returns a SuiteReport whose violation count must be zero on a
correct build. The CLI verify command maps a nonzero count (or a caught
theorem-audit failure) to exit code 3. Sweep sizes default to the acceptance
workload; tests and the CLI share these entry points.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import bounds, sampling, spectral, splitter
from .entropy import (
    JointDistribution,
    Kernel,
    entropy_vector,
    extend_independent,
    uniform_pair,
    uniformity_report,
)
from .errors import TheoremViolation
from .graphs import (
    build_grassmann_graph,
    build_polynomial_graph,
    build_projective_plane,
)
from .search import SearchConfig, local_min

TOL = 1e-9
MAX_FAILURES_KEPT = 10


@dataclass
class SuiteReport:
    suite: str
    cases: int = 0
    checks: int = 0
    violations: int = 0
    failures: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    elapsed_seconds: float = 0.0

    def passed(self) -> bool:
        return self.violations == 0

    def record(self, ok: bool, message: str):
        self.checks += 1
        if not ok:
            self.violations += 1
            if len(self.failures) < MAX_FAILURES_KEPT:
                self.failures.append(message)

    def to_json_dict(self):
        return {
            "suite": self.suite,
            "cases": self.cases,
            "checks": self.checks,
            "violations": self.violations,
            "passed": self.passed(),
            "failures": list(self.failures),
            "stats": dict(self.stats),
            "elapsed_seconds": self.elapsed_seconds,
        }


def _basic_cmi_checks(report, dist, tag):
    arity = dist.arity
    for i, j in combinations(range(arity), 2):
        rest = [v for v in range(arity) if v not in (i, j)]
        for r in range(len(rest) + 1):
            for k in combinations(rest, r):
                val = dist.mutual_information((i,), (j,), k)
                report.record(
                    val >= -TOL,
                    f"{tag}: I({i}:{j}|{k}) = {val!r} negative",
                )


def verify_shannon(seed=0, count4=10_000, count5=10_000) -> SuiteReport:
    """Shannon nonnegativity, the LLL gap, near-uniform entropy bounds on
    arity-4 sweeps; the Makarychev-type contracts on arity-5 sweeps."""
    report = SuiteReport("shannon")
    t0 = time.perf_counter()
    rng4, rng5 = sampling.spawn_rngs(seed, 2)
    worst_lll = math.inf
    roles4 = ((0,), (1,), (2,), (3,))

    for case in range(count4):
        support = int(rng4.integers(4, 65))
        dist = sampling.random_distribution(
            rng4, 4, (4, 4, 4, 4), support, heavy_tail=bool(case % 3 == 0)
        )
        entropy_vector(dist)
        _basic_cmi_checks(report, dist, f"arity4[{case}]")
        ing, lll = bounds.ing_lll_gap(dist, roles4)
        report.record(
            ing >= lll - TOL,
            f"arity4[{case}]: ing {ing!r} < lll bound {lll!r}",
        )
        worst_lll = min(worst_lll, ing - lll)
        for v in range(4):
            stats = dist.subset_stats((v,))
            h = dist.entropy((v,))
            cap = math.log2(stats.support)
            ratio = math.log2(float(stats.mass_ratio))
            report.record(
                h <= cap + TOL,
                f"arity4[{case}]: H({v}) = {h!r} above log2 support {cap!r}",
            )
            report.record(
                h >= cap - ratio - TOL,
                f"arity4[{case}]: H({v}) = {h!r} below support/uniformity floor",
            )
        report.cases += 1

    worst_mk = math.inf
    for case in range(count5):
        support = int(rng5.integers(5, 65))
        dist = sampling.random_distribution(
            rng5, 5, (3, 3, 3, 3, 3), support, heavy_tail=bool(case % 3 == 0)
        )
        ing, mk, wq = bounds.makarychev_gap(dist, (0,), (1,), (2,), (3,), (4,))
        report.record(
            ing >= mk - TOL,
            f"arity5[{case}]: ing {ing!r} < makarychev bound {mk!r}",
        )
        report.record(
            -mk <= wq + TOL,
            f"arity5[{case}]: -mk {-mk!r} above witness quality {wq!r}",
        )
        worst_mk = min(worst_mk, ing - mk)
        report.cases += 1

    report.stats = {"min_lll_slack": worst_lll, "min_makarychev_slack": worst_mk}
    report.elapsed_seconds = time.perf_counter() - t0
    return report


def _mixing_instances():
    return (
        ("projective-plane q=2", build_projective_plane(2)),
        ("poly q=3 k=2", build_polynomial_graph(3, 2)),
        ("grassmann q=2 n=4 k=1 l=2", build_grassmann_graph(2, 4, 1, 2)),
    )


def verify_mixing(seed=0, pairs=1000, subgraphs=500) -> SuiteReport:
    """Spectral mixing bound on random subset pairs, plus the logarithmic
    dichotomy on random induced subgraphs, across the three graph families."""
    report = SuiteReport("mixing")
    t0 = time.perf_counter()
    min_slack = math.inf
    branch_counts = {}
    for inst_idx, (tag, graph) in enumerate(_mixing_instances()):
        summary = spectral.singular_values(graph)
        rng_pairs, rng_sub = sampling.spawn_rngs((seed, inst_idx), 2)
        for case in range(pairs):
            xs = sampling.random_subset(
                rng_pairs, graph.x_size, int(rng_pairs.integers(1, graph.x_size + 1))
            )
            ys = sampling.random_subset(
                rng_pairs, graph.y_size, int(rng_pairs.integers(1, graph.y_size + 1))
            )
            res = spectral.mixing_check(graph, xs, ys, summary)
            report.record(
                res.holds,
                f"{tag} pair[{case}]: |{res.observed}-{res.expected!r}| > {res.bound!r}",
            )
            min_slack = min(min_slack, res.bound - abs(res.observed - res.expected))
            report.cases += 1
        done = 0
        attempt = 0
        while done < subgraphs:
            attempt += 1
            xs = sampling.random_subset(
                rng_sub, graph.x_size, int(rng_sub.integers(1, graph.x_size + 1))
            )
            ys = sampling.random_subset(
                rng_sub, graph.y_size, int(rng_sub.integers(1, graph.y_size + 1))
            )
            sub = graph.induced(xs, ys)
            if not sub.edge_subset:
                continue
            done += 1
            try:
                branch = spectral.mixing_log_alternative(sub, summary)
                branch_counts[branch] = branch_counts.get(branch, 0) + 1
                report.record(True, "")
            except TheoremViolation as exc:
                report.record(False, f"{tag} subgraph[{done}]: {exc}")
            report.cases += 1
    report.stats = {"min_mixing_slack": min_slack, "branches": branch_counts}
    report.elapsed_seconds = time.perf_counter() - t0
    return report


def verify_splitter(seed=0, count=1000, regularize_count=100) -> SuiteReport:
    """Dyadic split assertions on random distributions (audits run inside
    split_single), the worked four-atom example, and regularize audits."""
    report = SuiteReport("splitter")
    t0 = time.perf_counter()
    rng_split, rng_reg = sampling.spawn_rngs(seed, 2)

    for case in range(count):
        support = int(rng_split.integers(2, 4097))
        dist = sampling.random_distribution(
            rng_split, 1, (8192,), support, heavy_tail=bool(case % 2)
        )
        try:
            splitter.split_single(dist)
            report.record(True, "")
        except TheoremViolation as exc:
            report.record(False, f"split[{case}]: {exc}")
        report.cases += 1

    atoms = {(0,): Fraction(2, 5), (1,): Fraction(3, 10), (2,): Fraction(1, 5), (3,): Fraction(1, 10)}
    dist = JointDistribution(atoms, alphabets=[range(4)])
    res = splitter.split_single(dist)
    got_parts = tuple(tuple(sorted(part)) for part in res.parts)
    report.record(
        got_parts == ((0, 1), (2,), (3,)),
        f"worked example parts {got_parts!r}",
    )
    report.record(
        tuple(res.part_weights) == (Fraction(7, 10), Fraction(1, 5), Fraction(1, 10)),
        f"worked example weights {res.part_weights!r}",
    )
    report.cases += 1

    for case in range(regularize_count):
        size = int(rng_reg.integers(4, 501))
        picked = rng_reg.choice(8**4, size=size, replace=False)
        support = []
        for f in picked:
            t = []
            for _ in range(4):
                t.append(int(f % 8))
                f //= 8
            support.append(tuple(t))
        try:
            part = splitter.regularize(support, 2)
            report.record(True, "")
            report.stats["max_regular_parts"] = max(
                report.stats.get("max_regular_parts", 0), len(part.parts)
            )
        except TheoremViolation as exc:
            report.record(False, f"regularize[{case}]: {exc}")
        report.cases += 1

    report.elapsed_seconds = time.perf_counter() - t0
    return report


def _bounds_instances():
    return (
        ("projective-plane q=2", build_projective_plane(2)),
        ("poly q=2 k=1", build_polynomial_graph(2, 1)),
    )


ROLES4 = ((0,), (1,), (2,), (3,))


def verify_bounds(seed=0, kernel_count=100, restarts=20, triple_count=1000) -> SuiteReport:
    """The executable general bound: certified_main audits across copy
    kernels, constant kernels, random kernels, and search minimizers, plus a
    deterministic-triple sweep through the two-branch lemma."""
    report = SuiteReport("bounds")
    t0 = time.perf_counter()
    residuals = {}

    for inst_idx, (tag, graph) in enumerate(_bounds_instances()):
        pair = uniform_pair(graph)
        edges = list(pair.atoms.keys())
        copy_a = Kernel.deterministic({e: e[0] for e in edges}, graph.x_size)
        copy_b = Kernel.deterministic({e: e[1] for e in edges}, graph.y_size)
        const = Kernel.constant(edges)
        named = [("copyX/copyY", copy_a, copy_b), ("const/const", const, const)]
        rng = sampling.spawn_rngs((seed, inst_idx), 1)[0]
        for i in range(kernel_count):
            ka = sampling.random_kernel(rng, edges, 2)
            kb = sampling.random_kernel(rng, edges, 2)
            named.append((f"random[{i}]", ka, kb))

        for case_tag, ka, kb in named:
            dist = extend_independent(pair, ka, kb)
            try:
                rep = bounds.certified_main(dist, ROLES4, graph)
                report.record(
                    rep.actual_ing >= rep.certified - TOL,
                    f"{tag} {case_tag}: actual {rep.actual_ing!r} < certified {rep.certified!r}",
                )
                if rep.residual is not None:
                    key = f"min_residual[{tag}]"
                    residuals[key] = min(residuals.get(key, math.inf), rep.residual)
            except TheoremViolation as exc:
                report.record(False, f"{tag} {case_tag}: {exc}")
            report.cases += 1

        search_rep = local_min(
            pair, SearchConfig(strategy="local", restarts=restarts, seed=seed)
        )
        cb = search_rep.certified_at_best
        report.record(
            cb is not None and cb.actual_ing >= cb.certified - TOL,
            f"{tag} local_min minimizer failed the certified audit",
        )
        report.cases += 1

        if tag == "projective-plane q=2":
            rep0 = bounds.certified_main(
                extend_independent(pair, copy_a, copy_b), ROLES4, graph
            )
            expected = -(math.log2(7.0 / 3.0)) - 1.0
            report.record(
                abs(rep0.certified - expected) <= TOL and abs(rep0.actual_ing) <= TOL,
                f"hand trace: certified {rep0.certified!r}, actual {rep0.actual_ing!r}",
            )
            report.cases += 1

            rng_t = sampling.spawn_rngs((seed, 7), 1)[0]
            for case in range(triple_count):
                width = int(rng_t.integers(1, 5))
                f = sampling.random_kernel(rng_t, edges, width, deterministic=True)
                ext = pair.extend(f)
                delta = uniformity_report(ext).delta
                try:
                    bounds.triple_alternative(ext, (0,), (1,), (2,), graph, delta)
                    report.record(True, "")
                except TheoremViolation as exc:
                    report.record(False, f"triple[{case}] width {width}: {exc}")
                report.cases += 1

    report.stats = residuals
    report.elapsed_seconds = time.perf_counter() - t0
    return report


SUITES = {
    "shannon": verify_shannon,
    "mixing": verify_mixing,
    "splitter": verify_splitter,
    "bounds": verify_bounds,
}
