"""
Convergence experiments along the inductive sequence G_0 ⊂ G_1 ⊂ ... ⊂ G_∞.

Every experiment compares a level-n truncation (a G_n-ball) with a window
of the limit triple and decides PASS / FAIL / UNDECIDED from certified
brackets only.
"""
import math
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional

import numpy as np

from group_geometry import (
    Ball, LengthFunction, RootsOfUnityGroup, doubling_report, enumerate_ball,
    hausdorff_subgroup_distance,
)
from helpers import ConfigHelper, LoggerHelper
from helpers.constants import (
    FAIL, FAMILY_SOLENOID, PASS, UNDECIDED, VERDICT_ORDER,
)
from helpers.exceptions import ExperimentAbortedError, FamilyMismatchError, SpectralLabError
from services.experiment_config import ExperimentConfig
from spectral_triple import (
    BlockOperator, TruncatedTriple, commutator, comparison_norms, dirac, dn_norm,
    dynamics_lipschitz_check, function_preset, functional_calculus, generator_norm,
    op_norm_estimate, spectrum, symmetric_generator, unitary_dynamics,
)
from twisted_algebra import AlgebraElement, fejer_average, lambda_of

logger = LoggerHelper.get_logger(__name__, prefix='convergence-service')

Sink = Callable[[str, Dict[str, Any]], None]


def worst_verdict(verdicts: Iterable[str]) -> str:
    """FAIL beats UNDECIDED beats PASS; no verdicts at all is a PASS"""
    return max(verdicts, key=VERDICT_ORDER.__getitem__, default=PASS)


def truncate_to_level(f: AlgebraElement, n: int) -> AlgebraElement:
    """The restriction of f to G_n"""
    return AlgebraElement(f.group, {g: v for g, v in f if g.level <= n})


@dataclass
class ConvergenceReport:
    """Sections keyed by experiment name; each carries its own verdict"""

    suite: str
    family: str
    config: Dict[str, Any]
    diameter_proxy: float
    epsilon: float
    sections: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    timings_ms: Dict[str, float] = field(default_factory=dict)

    @property
    def verdicts(self) -> Dict[str, str]:
        return {name: section["verdict"] for name, section in self.sections.items() if "verdict" in section}

    @property
    def verdict(self) -> str:
        return worst_verdict(self.verdicts.values())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "suite": self.suite,
            "family": self.family,
            "verdict": self.verdict,
            "verdicts": self.verdicts,
            "timings_ms": self.timings_ms,
            "diameter_proxy": self.diameter_proxy,
            "epsilon": self.epsilon,
            "config": self.config,
            **self.sections,
        }


class ConvergenceService:
    """
    Runs the level experiments of one ExperimentConfig.

    Level tasks are submitted to a thread pool, one task per level, each with
    its own generator seeded by seed + level; results come back in level order.
    Window triples are built up front and shared read-only.
    """

    def __init__(self, config: ExperimentConfig, max_workers: Optional[int] = None, sink: Optional[Sink] = None):
        self.config = config
        self.group = config.build_group()
        self.length = config.build_length(self.group)
        self.h_length = self.length.h_part
        self.f_length = self.length.f_part
        self.cocycle = config.cocycle.build(self.group)
        self.budget = config.lab.budget
        self.tolerance = config.lab.tolerance
        self.seed = config.lab.seed
        self.sink = sink

        helper = ConfigHelper()
        section = config.experiment
        self.window_factor = section.window_factor or helper.get_window_factor()
        self.fejer_width = section.fejer_width or helper.get_fejer_width()
        # Relative slack when comparing two numerical norm estimates
        self.slack = max(100 * self.tolerance, 1e-10)

        self.max_workers = max_workers or helper.get_max_workers()
        self.executor = ThreadPoolExecutor(max_workers=self.max_workers)
        self._windows: Dict[float, TruncatedTriple] = {}
        self._lock = threading.Lock()
        self._diameter_proxy: Optional[float] = None

    def close(self):
        self.executor.shutdown(wait=True)

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    # Truncations

    def window(self, radius: float) -> TruncatedTriple:
        """The limit triple compressed to B(radius), cached per radius"""
        with self._lock:
            if radius not in self._windows:
                ball = enumerate_ball(self.length, radius, self.budget)
                self._windows[radius] = dirac(ball, self.h_length, self.f_length, self.cocycle)
            return self._windows[radius]

    def level_triple(self, n: int, radius: float) -> TruncatedTriple:
        """The level-n triple compressed to the G_n-ball B_n(radius)"""
        ball = enumerate_ball(self.length, radius, self.budget, max_level=n)
        return dirac(ball, self.h_length, self.f_length, self.cocycle, level=n)

    def _run_levels(self, task: Callable[[int], Any]) -> List[Any]:
        futures = [self.executor.submit(task, n) for n in self.config.experiment.levels]
        return [future.result() for future in futures]

    def _rng(self, n: int) -> np.random.Generator:
        return np.random.default_rng(self.seed + n)

    def _sample(self, ball: Ball, rng: np.random.Generator) -> Optional[AlgebraElement]:
        """Random self-adjoint element supported on the non-identity points of the ball"""
        candidates = [g for g in ball.elements if not g.is_identity]
        if not candidates:
            return None
        size = min(self.config.experiment.support_size, len(candidates))
        picks = rng.choice(len(candidates), size=size, replace=False)
        coefficients = {candidates[i]: complex(rng.normal(), rng.normal()) for i in picks}
        f = AlgebraElement(self.group, coefficients).symmetrized(self.cocycle)
        return f.trace_zero() if self.config.experiment.trace_zero else f

    def _bracket(self, t: TruncatedTriple, f: AlgebraElement) -> Dict[str, float]:
        """Certified bracket of the truncated commutator norm ‖[D, λ(f)]‖ on t"""
        estimate = op_norm_estimate(commutator(t, f), self.tolerance)
        sharp = float(sum(abs(c) * generator_norm(t, g) for g, c in f))
        return {"value": estimate.value, "lower": estimate.lower, "upper": min(estimate.upper, sharp)}

    def diameter_proxy(self) -> float:
        """Configured C, else 2 / (smallest nonzero length in the largest window)"""
        if self.config.experiment.diameter_proxy is not None:
            return float(self.config.experiment.diameter_proxy)
        if self._diameter_proxy is None:
            window = self.window(self.window_factor * self.config.experiment.radii[-1])
            lengths = [self.length(g) for g in window.ball.elements if not g.is_identity]
            self._diameter_proxy = 2.0 / min(lengths) if lengths else 2.0
        return self._diameter_proxy

    def epsilon(self) -> float:
        if self.config.experiment.epsilon is not None:
            return float(self.config.experiment.epsilon)
        return 0.4 * self.diameter_proxy()

    def _hausdorff_level(self, n: int, radius: float) -> float:
        exact = self.group.exact_hausdorff(n, self.h_length.selector)
        if exact is not None:
            return exact
        return hausdorff_subgroup_distance(self.length, n, radius, self.budget).enumerated

    # Geometry

    def geometry(self) -> Dict[str, Any]:
        """Rows of the largest window ball for the (𝕃_H, log 𝔽) scatter"""
        ball = self.window(self.config.experiment.radii[-1]).ball
        base = self.group.p if self.config.family.name == FAMILY_SOLENOID else self.group.tower[1]
        return {"radius": ball.radius, "size": len(ball), "base": base, "rows": ball.rows()}

    def spectrum(self) -> Dict[str, Any]:
        t = self.window(self.config.experiment.radii[-1])
        return {"radius": t.ball.radius, "size": t.size, "eigenvalues": spectrum(t)}

    def doubling(self) -> Dict[str, Any]:
        geometry = self.config.geometry
        report = doubling_report(self.length, geometry.theta, geometry.doubling_radii, geometry.doubling_bound, self.budget)
        result = report.to_dict()
        result["verdict"] = FAIL if report.within_bound is False else PASS
        return result

    def hausdorff(self) -> Dict[str, Any]:
        rows = []
        for n in self.config.experiment.levels:
            for radius in self.config.experiment.radii:
                report = hausdorff_subgroup_distance(self.length, n, radius, self.budget)
                row = report.to_dict()
                row["within_exact"] = report.exact is None or report.enumerated <= report.exact + self.tolerance
                rows.append(row)
        verdict = PASS if all(row["within_exact"] for row in rows) else FAIL
        return {"rows": rows, "verdict": verdict}

    def tower_counts(self) -> Dict[str, Any]:
        """
        On ℤ(α) with the level length alone: |B(α_d)| = α_d, and at
        r = α_{n+1}/2 the doubling ratio is exactly α_{n+1}/α_n.
        """
        family = self.config.family
        group = RootsOfUnityGroup(family.alpha, integer_factor=False, circle_length=family.circle_length)
        f_length = LengthFunction.f(group)
        tower = group.tower
        counts = []
        for d, a_d in enumerate(tower):
            size = len(enumerate_ball(f_length, a_d, self.budget))
            counts.append({"level": d, "radius": a_d, "count": size, "expected": a_d, "match": size == a_d})
        ratios = []
        for n in range(len(tower) - 1):
            r = tower[n + 1] / 2
            inner = len(enumerate_ball(f_length, r, self.budget))
            outer = len(enumerate_ball(f_length, 2 * r, self.budget))
            expected = tower[n + 1] / tower[n]
            ratios.append({"level": n, "radius": r, "inner": inner, "outer": outer, "ratio": outer / inner,
                           "expected": expected, "match": math.isclose(outer / inner, expected)})
        matched = all(row["match"] for row in counts + ratios)
        return {"rows": counts, "doubling": ratios, "verdict": PASS if matched else FAIL}

    # Seminorms

    def _compare(self, n: int, radius: float, f_id: str, f: AlgebraElement, t_n: TruncatedTriple,
                 t_w: TruncatedTriple, predicted: float) -> Dict[str, Any]:
        level, window = self._bracket(t_n, f), self._bracket(t_w, f)
        if level["lower"] > window["upper"] * (1 + self.slack) + self.slack:
            verdict = FAIL
        elif level["lower"] > window["lower"] * (1 + self.slack) + self.slack:
            verdict = UNDECIDED
        else:
            verdict = PASS
        ratio = window["value"] / level["value"] if level["value"] > 0 else None
        return {
            "level": n, "radius": radius, "f_id": f_id,
            "level_lower": level["lower"], "level_upper": level["upper"],
            "window_lower": window["lower"], "window_upper": window["upper"],
            "ratio": ratio, "ratio_undefined": ratio is None, "predicted": predicted,
            "verdict": verdict,
        }

    def _comparison_violations(self, t: TruncatedTriple, f: AlgebraElement) -> int:
        """max(h, f) ≤ dirac ≤ h + f and sum ≤ 2·dirac, counted per broken side"""
        norms = comparison_norms(t, f, self.tolerance)
        bound = norms["dirac"] * (1 + self.slack) + self.slack
        split = (norms["h"] + norms["f"]) * (1 + self.slack) + self.slack
        return (int(norms["h"] > bound) + int(norms["f"] > bound) + int(norms["sum"] > 2 * bound)
                + int(norms["dirac"] > split))

    def seminorm_comparison(self) -> Dict[str, Any]:
        """
        L_n(f) against the window seminorm for sampled f ∈ C_c(G_n), plus the
        δ_identity and symmetric δ_g rows, next to 1/(1 − h_n/C).
        """
        section = self.config.experiment
        C = self.diameter_proxy()
        for radius in section.radii:
            self.window(self.window_factor * radius)

        def task(n: int) -> Dict[str, Any]:
            rng = self._rng(n)
            rows, violations, samples = [], 0, 0
            for radius in section.radii:
                t_n = self.level_triple(n, radius)
                t_w = self.window(self.window_factor * radius)
                h_n = self._hausdorff_level(n, radius)
                predicted = 1.0 / (1.0 - h_n / C) if h_n < C else math.inf
                identity = AlgebraElement.delta(self.group.identity())
                rows.append(self._compare(n, radius, "delta_identity", identity, t_n, t_w, predicted))
                others = [g for g in t_n.ball.elements if not g.is_identity]
                if others:
                    g = others[-1]
                    rows.append(self._compare(n, radius, "delta_" + ",".join(map(str, g.to_list())),
                                              symmetric_generator(g, self.cocycle),
                                              t_n, t_w, predicted))
                for i in range(section.samples):
                    f = self._sample(t_n.ball, rng)
                    if f is None:
                        break
                    rows.append(self._compare(n, radius, f"sample_{i}", f, t_n, t_w, predicted))
                    violations += self._comparison_violations(t_n, f)
                    samples += 1
            logger.debug(f"Seminorm comparison finished for level {n}",
                         extra={"family": self.group.key, "level": n, "samples": samples})
            return {"rows": rows, "violations": violations, "samples": samples}

        started = time.perf_counter()
        per_level = self._run_levels(task)
        rows = [row for result in per_level for row in result["rows"]]
        violations = sum(result["violations"] for result in per_level)

        ratios = []
        for n in section.levels:
            for radius in section.radii:
                defined = [row for row in rows if row["level"] == n and row["radius"] == radius and row["ratio"] is not None]
                if defined:
                    ratios.append({
                        "level": n, "radius": radius,
                        "max_ratio": max(row["ratio"] for row in defined),
                        "predicted": defined[0]["predicted"],
                    })

        verdict = worst_verdict(row["verdict"] for row in rows)
        if violations:
            verdict = FAIL
        logger.info(
            f"Seminorm comparison on {self.group.key}: {verdict}",
            extra={"family": self.group.key, "rows": len(rows), "violations": violations,
                   "elapsed_ms": round(1000 * (time.perf_counter() - started), 3)},
        )
        return {
            "diameter_proxy": C,
            "window_factor": self.window_factor,
            "rows": rows,
            "ratios": ratios,
            "comparison": {"samples": sum(r["samples"] for r in per_level), "violations": violations},
            "verdict": verdict,
        }

    # Functional calculus and dynamics

    @staticmethod
    def _embedded(t_n: TruncatedTriple, op_n: BlockOperator, t_w: TruncatedTriple, fill: Optional[np.ndarray] = None) -> BlockOperator:
        """P_n X P_n placed in the window blocks; other blocks are `fill` (zero by default)"""
        blocks = np.zeros((t_w.size, t_w.fibre, t_w.fibre), dtype=complex)
        if fill is not None:
            blocks[:] = fill
        for i, g in enumerate(t_n.ball.elements):
            blocks[t_w.ball.index(g)] = op_n.blocks[i]
        return BlockOperator(blocks)

    def functional_calculus_convergence(self, fn: Optional[Callable] = None) -> Dict[str, Any]:
        """‖P_n f(D_n) P_n − f(D_window)‖ on B(R) for every level and radius"""
        section = self.config.experiment
        fn = fn or function_preset(section.function)
        for radius in section.radii:
            self.window(radius)

        def task(n: int) -> List[Dict[str, Any]]:
            rows = []
            for radius in section.radii:
                t_w = self.window(radius)
                t_n = dirac(t_w.ball.restricted_to_level(n), self.h_length, self.f_length, self.cocycle, level=n)
                embedded = self._embedded(t_n, functional_calculus(t_n, fn), t_w)
                deviation = (functional_calculus(t_w, fn) - embedded).norm()
                rows.append({"level": n, "radius": radius, "deviation": deviation,
                             "saturated": t_n.size == t_w.size, "level_size": t_n.size, "window_size": t_w.size})
            return rows

        rows = [row for result in self._run_levels(task) for row in result]
        trends = {}
        for radius in section.radii:
            series = [row["deviation"] for row in rows if row["radius"] == radius]
            trends[str(radius)] = all(b <= a + self.slack for a, b in zip(series, series[1:]))
        exact = all(row["deviation"] <= self.slack for row in rows if row["saturated"])
        verdict = PASS if all(trends.values()) and exact else FAIL
        logger.info(f"Functional calculus convergence on {self.group.key}: {verdict}",
                    extra={"family": self.group.key, "rows": len(rows)})
        return {"function": section.function, "rows": rows, "non_increasing": trends, "verdict": verdict}

    def dynamics_deviation(self, times: Optional[List[float]] = None) -> Dict[str, Any]:
        """
        sup_t ‖exp(itD_n)ξ − exp(itD_window)ξ‖ for ξ with ‖ξ‖ + ‖Dξ‖ = 1, where
        D_n acts as 0 off G_n; each deviation must stay below t‖Dξ‖.
        """
        section = self.config.experiment
        times = list(times if times is not None else section.times)
        t_w = self.window(section.radii[-1])
        rng = np.random.default_rng(self.seed)
        vectors = []
        for _ in range(section.dynamics_samples):
            xi = t_w.random_vector(rng)
            vectors.append(xi / dn_norm(t_w, xi))
        window_dynamics = {s: unitary_dynamics(t_w, s) for s in times}
        identity = t_w.clifford.identity
        window_dirac = t_w.dirac_operator()

        def task(n: int) -> Dict[str, Any]:
            t_n = dirac(t_w.ball.restricted_to_level(n), self.h_length, self.f_length, self.cocycle, level=n)
            level_dynamics = {s: self._embedded(t_n, unitary_dynamics(t_n, s), t_w, identity) for s in times}
            rows, violations = [], 0
            for index, xi in enumerate(vectors):
                d_norm = float(np.linalg.norm(window_dirac.apply(xi)))
                worst, worst_excess = 0.0, -math.inf
                for s in times:
                    deviation = float(np.linalg.norm((window_dynamics[s] - level_dynamics[s]).apply(xi)))
                    excess = deviation - abs(s) * d_norm
                    worst, worst_excess = max(worst, deviation), max(worst_excess, excess)
                    if excess > self.slack:
                        violations += 1
                rows.append({"level": n, "sample": index, "deviation": worst, "bound": max(map(abs, times), default=0.0) * d_norm,
                             "max_excess": worst_excess})
            horizon = max(times, default=1.0) or 1.0
            lipschitz = dynamics_lipschitz_check(t_n, self._rng(n), section.dynamics_samples, horizon, self.slack)
            return {"rows": rows, "violations": violations, "lipschitz": {"level": n, **lipschitz.to_dict()}}

        per_level = self._run_levels(task)
        rows = [row for result in per_level for row in result["rows"]]
        lipschitz = [result["lipschitz"] for result in per_level]
        violations = sum(result["violations"] for result in per_level)
        trend = all(
            b["deviation"] <= a["deviation"] + self.slack
            for a, b in zip(rows, rows[len(vectors):])
        )
        failed = violations or any(not check["passed"] for check in lipschitz)
        verdict = FAIL if failed else PASS
        logger.info(f"Dynamics deviation on {self.group.key}: {verdict}",
                    extra={"family": self.group.key, "samples": len(vectors), "violations": violations})
        return {"times": times, "rows": rows, "lipschitz": lipschitz, "violations": violations,
                "non_increasing": trend, "verdict": verdict}

    # Bridge builders

    def _a_side(self, n: int, radius: float, a: AlgebraElement, epsilon: float) -> Dict[str, Any]:
        """b = s·(Fejér-smoothed a truncated to G_n), scaled so L_n(b) ≤ L(a) is certified"""
        t_w = self.window(self.window_factor * radius)
        lower_a = self._bracket(t_w, a)["lower"]
        smoothed = truncate_to_level(fejer_average(a, max(n, 1), self.fejer_width), n)
        sharp_b = float(sum(abs(c) * generator_norm(t_w, g) for g, c in smoothed))
        scale = 1.0 if sharp_b == 0 else min(1.0, lower_a / sharp_b)
        b = smoothed * scale
        distance = (a - b).l1_norm()
        certified = distance == 0 or distance < epsilon * lower_a
        return {
            "side": "a", "level": n, "radius": radius, "support": len(a),
            "a_lower": lower_a, "b_upper": scale * sharp_b, "scale": scale,
            "distance_upper": distance, "threshold": epsilon * lower_a,
            "verdict": PASS if certified else UNDECIDED,
        }

    def _b_side(self, n: int, radius: float, t_n: TruncatedTriple, b: AlgebraElement, C: float) -> Dict[str, Any]:
        """a = (1 − ε/C)b; ‖a − b‖ = (ε/C)‖b‖ ≤ ε·L_n(b) needs ‖b‖ ≤ C·L_n(b)"""
        bracket = self._bracket(t_n, b)
        l1 = b.l1_norm()
        c_star_lower = op_norm_estimate(lambda_of(b, t_n.ball, self.cocycle), self.tolerance).lower
        if l1 <= C * bracket["lower"]:
            verdict = PASS
        elif c_star_lower > C * bracket["upper"]:
            verdict = FAIL
        else:
            verdict = UNDECIDED
        return {
            "side": "b", "level": n, "radius": radius, "support": len(b),
            "b_lower": bracket["lower"], "b_upper": bracket["upper"],
            "norm_upper": l1, "norm_lower": c_star_lower, "threshold": C * bracket["lower"],
            "verdict": verdict,
        }

    def bridge_builder_certificate(self, epsilon: Optional[float] = None) -> Dict[str, Any]:
        """
        Both bridge-builder inequalities with the identity map, on sampled a
        from the window side and sampled b from the level side.
        """
        section = self.config.experiment
        C = self.diameter_proxy()
        epsilon = float(epsilon) if epsilon is not None else self.epsilon()
        if not 0 < epsilon < C / 2:
            raise SpectralLabError(f"epsilon {epsilon} must lie in (0, C/2) with C = {C}")
        for radius in section.radii:
            self.window(self.window_factor * radius)
            self.window(radius)

        def task(n: int) -> List[Dict[str, Any]]:
            rng = self._rng(n)
            rows = []
            for radius in section.radii:
                t_n = self.level_triple(n, radius)
                source = self.window(radius).ball if section.bridge_support == "window" else t_n.ball
                for _ in range(section.bridge_samples):
                    a = self._sample(source, rng)
                    if a is None:
                        break
                    rows.append(self._a_side(n, radius, a, epsilon))
                for _ in range(section.bridge_samples):
                    b = self._sample(t_n.ball, rng)
                    if b is None:
                        break
                    rows.append(self._b_side(n, radius, t_n, b, C))
            return rows

        rows = [row for result in self._run_levels(task) for row in result]
        verdict = worst_verdict(row["verdict"] for row in rows)
        logger.info(f"Bridge builder certificate on {self.group.key}: {verdict}",
                    extra={"family": self.group.key, "rows": len(rows), "epsilon": epsilon, "diameter_proxy": C})
        return {"epsilon": epsilon, "diameter_proxy": C, "bridge_support": section.bridge_support,
                "rows": rows, "verdict": verdict}

    # Suites

    def _steps(self, tower: bool) -> List[tuple]:
        steps = [("geometry", self.geometry), ("spectrum", self.spectrum), ("doubling", self.doubling)]
        if tower:
            steps.append(("tower_counts", self.tower_counts))
        steps += [
            ("hausdorff", self.hausdorff),
            ("seminorm", self.seminorm_comparison),
            ("functional_calculus", self.functional_calculus_convergence),
            ("dynamics", self.dynamics_deviation),
            ("bridge", self.bridge_builder_certificate),
        ]
        return steps

    def _run_suite(self, name: str, tower: bool) -> ConvergenceReport:
        report = ConvergenceReport(
            suite=name, family=self.group.key, config=self.config.to_dict(),
            diameter_proxy=self.diameter_proxy(), epsilon=self.epsilon(),
        )
        for step, run in self._steps(tower):
            started = time.perf_counter()
            try:
                section = run()
            except Exception as e:
                logger.error(f"{name}: step {step} failed: {e}")
                raise ExperimentAbortedError(f"{step} failed: {e}", partial=report.to_dict()) from e
            report.sections[step] = section
            report.timings_ms[step] = round(1000 * (time.perf_counter() - started), 3)
            if self.sink is not None:
                self.sink(step, section)
            logger.info(
                f"{name}: {step} {section.get('verdict', 'done')}",
                extra={"family": self.group.key, "step": step, "elapsed_ms": report.timings_ms[step]},
            )
        return report

    def run_solenoid_suite(self) -> ConvergenceReport:
        if self.config.family.name != FAMILY_SOLENOID:
            raise FamilyMismatchError(f"the solenoid suite needs a solenoid family, got {self.config.family.name}")
        return self._run_suite("suite-solenoid", tower=False)

    def run_bd_suite(self) -> ConvergenceReport:
        if self.config.family.name == FAMILY_SOLENOID:
            raise FamilyMismatchError("the Bunce-Deddens suite needs a tower family")
        return self._run_suite("suite-bd", tower=True)
