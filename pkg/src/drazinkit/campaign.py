"""Verification campaigns, the exhaustive oracle sweep and the two
counterexamples, producing JSON-ready reports.

A campaign runs ``trials`` seeded trials of one identity group in one
(domain, dimension) cell. Trial ``i`` draws all of its inputs from
``trial_rng(seed, i)``, so reports are reproducible byte for byte apart from
the ``elapsed_ms`` fields.
"""

from __future__ import annotations

import itertools
import json
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

from . import calculus as calc
from .engine import (
    IntegerRing,
    MatrixRing,
    ModularRing,
    RingContext,
    brute_force_drazin,
    drazin,
    integer_drazin,
    is_drazin_pair,
    modular_drazin,
)
from .errors import (
    ContextTooLarge,
    DrazinKitError,
    EngineError,
    IdentityViolation,
    NotDrazinInvertible,
    PreconditionViolated,
    UnsupportedDomain,
)
from .generators import (
    GenSpec,
    random_core_nilpotent,
    random_idempotent,
    random_matrix,
    special_pairs,
    trial_rng,
    trial_seed,
)
from .matrix import Matrix, diag, identity, mat_pow
from .scalars import GF, QQ, ZZ, Domain, Kind, ModularInt

THEOREM_IDS = (
    "L2.1", "L2.2", "L2.3", "L2.4",
    "T3.2", "C3.3", "T3.4", "T3.5", "T3.6", "T3.7", "T3.8",
    "T3.9", "T3.10", "T3.11", "C3.12",
)

DEFAULT_DOMAINS = (GF(2), GF(3), GF(7), GF(13), QQ)
DEFAULT_DIMS = (1, 2, 3, 4, 5)
DEFAULT_TRIALS = 500
DEFAULT_SEED = 0


class UsageError(DrazinKitError, ValueError):
    """Invalid theorem/domain/dimension combination (CLI exit code 2)."""


def serialize(x) -> Any:
    if isinstance(x, Matrix):
        return x.to_strings()
    if x is None:
        return None
    return str(x)


# -- reports -------------------------------------------------------------


@dataclass
class Failure:
    seed: int
    trial: int
    trial_seed: int
    inputs: Dict[str, Any]
    equation: str
    detail: str = ""


@dataclass
class VerifyReport:
    theorem: str
    domain: str
    dimension: int
    trials: int
    seed: int
    checked: int = 0
    skipped: int = 0
    failures: List[Failure] = field(default_factory=list)
    elapsed_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = self.passed
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "VerifyReport":
        d = dict(d)
        d.pop("pass", None)
        d["failures"] = [Failure(**f) for f in d["failures"]]
        return cls(**d)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def strip_elapsed(obj):
    """Copy of a report structure with every ``elapsed_ms`` removed."""
    if isinstance(obj, dict):
        return {k: strip_elapsed(v) for k, v in obj.items() if k != "elapsed_ms"}
    if isinstance(obj, list):
        return [strip_elapsed(v) for v in obj]
    return obj


# -- trial construction ----------------------------------------------------


def _context(domain: Domain, dim: int) -> RingContext:
    if domain.is_field:
        return MatrixRing(domain, dim)
    if dim != 1:
        raise UsageError(f"{domain} is only supported as a scalar ring (--dim 1)")
    return ModularRing(domain.modulus) if domain.kind is Kind.MODULAR else IntegerRing()


def _scalar_idempotents(ctx: RingContext) -> list:
    if isinstance(ctx, IntegerRing):
        return [0, 1]
    return [e for e in ctx.elements() if e * e == e]


def _scalar_elements(ctx: RingContext, rng) -> Any:
    if isinstance(ctx, IntegerRing):
        return rng.randint(-2, 2)
    return ModularInt(rng.randrange(ctx.n), ctx.n)


def _pair(kind: str, ctx: RingContext, spec: Optional[GenSpec], rng) -> calc.IdempotentPair:
    if isinstance(ctx, MatrixRing):
        return special_pairs(kind, spec, rng)
    idem = _scalar_idempotents(ctx)
    if kind == "commuting" or kind == "unrestricted":
        return calc.IdempotentPair(rng.choice(idem), rng.choice(idem), ctx)
    if kind == "difference-invertible":
        ok = [(p, q) for p in idem for q in idem if ctx.drazin(p - q).index == 0]
        p, q = rng.choice(ok)
        return calc.IdempotentPair(p, q, ctx)
    if kind == "nilpotent-condition":
        ok = []
        for p in idem:
            for q in idem:
                pr = calc.IdempotentPair(p, q, ctx)
                try:
                    if calc.sum_condition_holds(pr):
                        ok.append(pr)
                except NotDrazinInvertible:
                    pass
        return rng.choice(ok)
    raise UsageError(f"pair kind {kind} unavailable in {ctx}")


def _elements_pair(ctx: RingContext, spec: Optional[GenSpec], rng, trial: int):
    """General (a, b) for the Cline / Jacobson checks, cycling through
    unstructured, core-nilpotent, commuting and idempotent inputs."""
    if not isinstance(ctx, MatrixRing):
        return _scalar_elements(ctx, rng), _scalar_elements(ctx, rng)
    mode = trial % 4
    if mode == 0:
        return random_matrix(spec, rng), random_matrix(spec, rng)
    if mode == 1:
        return random_core_nilpotent(spec, rng), random_core_nilpotent(spec, rng)
    if mode == 2:
        a = random_core_nilpotent(spec, rng)
        # a polynomial in a commutes with a
        c0, c1, c2 = (rng.randint(-2, 2) for _ in range(3))
        b = c0 * ctx.one + c1 * a + c2 * (a * a)
        return a, b
    return random_idempotent(spec, rng), random_core_nilpotent(spec, rng)


# -- theorem checks ----------------------------------------------------------


@dataclass(frozen=True)
class Check:
    kinds: Sequence[str]  # pair kinds, cycled by trial index; empty => (a, b)
    run: Callable
    needs_rationals: bool = False


def _run_census(pair):
    calc.sigma_census(pair)


def _run_fgh(pair):
    calc.fgh(pair)


def _run_relations(pair):
    calc.fgh_relations(pair)


def _run_projectors(pair):
    calc.projector_criteria(pair, calc.transpose_involution(pair.ctx))


CHECKS: Dict[str, Check] = {
    "L2.1": Check(("unrestricted", "commuting"), _run_census),
    "L2.2": Check(("unrestricted", "commuting"), _run_census),
    "L2.3": Check((), lambda a, b, ctx: calc.cline(a, b, ctx)),
    "L2.4": Check((), lambda a, b, ctx: calc.jacobson(a, b, ctx)),
    "T3.2": Check(("unrestricted", "commuting"), _run_fgh),
    "C3.3": Check(("unrestricted", "commuting"), _run_relations),
    "T3.4": Check(("unrestricted", "commuting"), _run_relations),
    "T3.5": Check(("unrestricted", "commuting"), calc.derived_from_difference),
    "T3.6": Check(("unrestricted", "commuting"), calc.derived_from_complement),
    "T3.7": Check(("commuting", "unrestricted"), calc.product_identities),
    "T3.8": Check(("unrestricted", "commuting"), calc.difference_from_products),
    "T3.9": Check(
        ("annihilating-projectors", "projectors", "commuting-projectors", "projectors"),
        _run_projectors,
        needs_rationals=True,
    ),
    "T3.10": Check(("nilpotent-condition",), calc.sum_via_difference),
    "T3.11": Check(("unrestricted", "nilpotent-condition"), calc.difference_via_corner),
    "C3.12": Check(("difference-invertible",), calc.invertible_case),
}

def run_trial(theorem: str, ctx: RingContext, spec: Optional[GenSpec], seed: int, trial: int):
    """One trial; returns ``None`` (pass), ``"skip"`` or a :class:`Failure`."""
    check = CHECKS[theorem]
    rng = trial_rng(seed, trial)
    inputs: Dict[str, Any] = {}
    try:
        if check.kinds:
            kind = check.kinds[trial % len(check.kinds)]
            pair = _pair(kind, ctx, spec, rng)
            inputs = {"kind": kind, "p": serialize(pair.p), "q": serialize(pair.q)}
            check.run(pair)
        else:
            a, b = _elements_pair(ctx, spec, rng, trial)
            inputs = {"a": serialize(a), "b": serialize(b)}
            check.run(a, b, ctx)
    except IdentityViolation as exc:
        return Failure(seed, trial, trial_seed(seed, trial), inputs, exc.equation, exc.detail)
    except (PreconditionViolated, NotDrazinInvertible):
        return "skip"
    except EngineError as exc:
        return Failure(seed, trial, trial_seed(seed, trial), inputs, "engine", str(exc))
    return None


def verify(theorem: str, domain: Domain, dim: int, trials: int, seed: int) -> VerifyReport:
    """Run one campaign cell."""
    if theorem not in CHECKS:
        raise UsageError(f"unknown theorem id {theorem!r}; choose from {', '.join(THEOREM_IDS)}")
    check = CHECKS[theorem]
    if check.needs_rationals and domain.kind is not Kind.RATIONALS:
        raise UsageError(f"{theorem} requires rationals (Q); {domain.tag} is not *-reducing")
    if trials < 0 or dim < 1:
        raise UsageError("trials must be >= 0 and dim >= 1")
    ctx = _context(domain, dim)
    spec = GenSpec(domain, dim, seed=seed) if isinstance(ctx, MatrixRing) else None
    report = VerifyReport(theorem, domain.tag, dim, trials, seed)
    t0 = time.perf_counter()
    for i in range(trials):
        outcome = run_trial(theorem, ctx, spec, seed, i)
        if outcome == "skip":
            report.skipped += 1
            continue
        report.checked += 1
        if outcome is not None:
            report.failures.append(outcome)
    report.elapsed_ms = round((time.perf_counter() - t0) * 1000, 3)
    return report


def verify_all(
    theorems: Sequence[str] = THEOREM_IDS,
    domains: Sequence[Domain] = DEFAULT_DOMAINS,
    dims: Sequence[int] = DEFAULT_DIMS,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    progress: Optional[Callable[[VerifyReport], None]] = None,
) -> dict:
    """Campaign grid; cells that do not apply (projector criteria away from
    Q) are left out rather than failed."""
    t0 = time.perf_counter()
    reports = []
    for theorem in theorems:
        for domain in domains:
            if CHECKS[theorem].needs_rationals and domain.kind is not Kind.RATIONALS:
                continue
            for dim in dims:
                rep = verify(theorem, domain, dim, trials, seed)
                reports.append(rep)
                if progress:
                    progress(rep)
    return {
        "reports": [r.to_dict() for r in reports],
        "pass": all(r.passed for r in reports),
        "failures": sum(len(r.failures) for r in reports),
        "elapsed_ms": round((time.perf_counter() - t0) * 1000, 3),
    }


# -- exhaustive oracle ---------------------------------------------------------

ORACLE_CAP = 10**5

# identity groups that take an idempotent pair, with the routine that checks them
_PAIR_SWEEP = (
    ("L2.1/L2.2", calc.sigma_census),
    ("T3.2/C3.3/T3.4", calc.fgh_relations),
    ("T3.5", calc.derived_from_difference),
    ("T3.6", calc.derived_from_complement),
    ("T3.7", calc.product_identities),
    ("T3.8", calc.difference_from_products),
    ("T3.10", calc.sum_via_difference),
    ("T3.11", calc.difference_via_corner),
    ("C3.12", calc.invertible_case),
)


def _oracle_nilpotent(x, ctx: RingContext) -> bool:
    """Nilpotency by plain repeated multiplication up to |R| steps."""
    y = x
    for _ in range(ctx.size):
        if y == ctx.zero:
            return True
        y = y * x
    return y == ctx.zero


def oracle(domain: Domain, dim: int, cap: int = ORACLE_CAP) -> dict:
    """Engine vs exhaustive search on every element, then every identity on
    every idempotent pair whose hypotheses hold."""
    if not domain.is_modular:
        raise UsageError(f"oracle needs a finite domain, got {domain.tag}")
    if domain.kind is Kind.PRIME_FIELD:
        if dim > 2:
            raise ContextTooLarge(f"oracle supports dim <= 2, got {dim}")
        ctx: RingContext = MatrixRing(domain, dim)
        engine = drazin
    else:
        if dim != 1:
            raise UsageError(f"{domain} is only supported as a scalar ring (--dim 1)")
        ctx = ModularRing(domain.modulus)
        engine = modular_drazin
    if ctx.size > cap:
        raise ContextTooLarge(f"{ctx.size} elements exceeds the cap {cap}")
    t0 = time.perf_counter()
    elements = list(ctx.elements())
    mismatches = []
    oracle_pi = {}
    for a in elements:
        mine = engine(a)
        ref = brute_force_drazin(a, ctx, cap=cap)  # raises if not unique
        oracle_pi[a] = ref.pi
        if (mine.d, mine.index, mine.pi) != (ref.d, ref.index, ref.pi):
            mismatches.append(serialize(a))

    idempotents = [e for e in elements if e * e == e]
    theorems: Dict[str, Dict[str, Any]] = {
        name: {"checked": 0, "skipped": 0, "failures": []} for name, _ in _PAIR_SWEEP
    }
    theorems["L2.3"] = {"checked": 0, "skipped": 0, "failures": []}
    theorems["L2.4"] = {"checked": 0, "skipped": 0, "failures": []}
    partition = {"condition_holds": 0, "condition_fails": 0, "disagreements": 0}
    literal_reading_failures = 0
    for p, q in itertools.product(idempotents, repeat=2):
        pair = calc.IdempotentPair(p, q, ctx)
        inputs = {"p": serialize(p), "q": serialize(q)}
        for name, fn in _PAIR_SWEEP:
            slot = theorems[name]
            try:
                fn(pair)
                slot["checked"] += 1
            except (PreconditionViolated, NotDrazinInvertible):
                slot["skipped"] += 1
            except IdentityViolation as exc:
                slot["checked"] += 1
                slot["failures"].append({**inputs, "equation": exc.equation, "detail": exc.detail})
        for name, fn in (("L2.3", calc.cline), ("L2.4", calc.jacobson)):
            slot = theorems[name]
            try:
                fn(p, q, ctx)
                slot["checked"] += 1
            except NotDrazinInvertible:
                slot["skipped"] += 1
            except IdentityViolation as exc:
                slot["checked"] += 1
                slot["failures"].append({**inputs, "equation": exc.equation, "detail": exc.detail})
        # hypothesis filter vs the oracle's own spectral idempotent
        by_filter = calc.sum_condition_holds(pair)
        by_oracle = _oracle_nilpotent((p + q) * oracle_pi[p - q], ctx)
        partition["condition_holds" if by_oracle else "condition_fails"] += 1
        if by_filter != by_oracle:
            partition["disagreements"] += 1
        # the weaker hypothesis (Drazin invertibility only) is vacuous here,
        # so count how often the vanishing-residual statement would fail
        sq = (p - q) * (p - q)
        resid = p * (engine(p + q).d - engine(p - q).d) * sq
        if resid != ctx.zero:
            literal_reading_failures += 1

    failures = sum(len(t["failures"]) for t in theorems.values())
    ok = not mismatches and not failures and partition["disagreements"] == 0
    return {
        "domain": domain.tag,
        "dimension": dim,
        "elements": len(elements),
        "mismatches": len(mismatches),
        "mismatched_elements": mismatches,
        "uniqueness_count": 1,
        "idempotents": len(idempotents),
        "pairs": len(idempotents) ** 2,
        "theorems": theorems,
        "sum_condition_partition": partition,
        "residual_identity_without_nilpotency_failures": literal_reading_failures,
        "pass": ok,
        "elapsed_ms": round((time.perf_counter() - t0) * 1000, 3),
    }


# -- counterexamples -----------------------------------------------------------


def _matrix_case() -> dict:
    """Over GF(7): p = I, q = diag(1, 0). Both p+q and p-q are Drazin
    invertible, yet (p+q)(p-q)^pi is not nilpotent."""
    f = GF(7)
    p, q = identity(2, f), diag([1, 0], f)
    pair = calc.IdempotentPair(p, q)
    s, t = p + q, p - q
    s_res, t_res = drazin(s), drazin(t)
    w = s * t_res.pi
    bound = 2
    powers = [mat_pow(w, m) for m in range(1, bound + 1)]
    try:
        calc.sum_via_difference(pair)
        filter_rejects = False
    except PreconditionViolated:
        filter_rejects = True
    fixture = {
        "p+q": diag([2, 1], f),
        "p-q": diag([0, 1], f),
        "(p+q)^D": diag([4, 1], f),
        "(p-q)^D": diag([0, 1], f),
        "(p-q)^pi": diag([1, 0], f),
        "(p+q)(p-q)^pi": diag([2, 0], f),
    }
    computed = {
        "p+q": s,
        "p-q": t,
        "(p+q)^D": s_res.d,
        "(p-q)^D": t_res.d,
        "(p-q)^pi": t_res.pi,
        "(p+q)(p-q)^pi": w,
    }
    verdicts = {
        "p+q_drazin_invertible": is_drazin_pair(s, s_res.d),
        "p-q_drazin_invertible": is_drazin_pair(t, t_res.d),
        "product_nilpotent": any(m.is_zero() for m in powers),
        "hypothesis_filter_rejects": filter_rejects,
    }
    expected = {
        "p+q_drazin_invertible": True,
        "p-q_drazin_invertible": True,
        "product_nilpotent": False,
        "hypothesis_filter_rejects": True,
    }
    # 2^6 = 1 mod 7, so the powers cycle back to diag(1, 0)
    sixth = mat_pow(w, 6)
    matches = computed == fixture and verdicts == expected and sixth == diag([1, 0], f)
    return {
        "case": "M2(Z7)",
        "p": serialize(p),
        "q": serialize(q),
        "elements": {k: serialize(v) for k, v in computed.items()},
        "powers_of_product": {str(m + 1): serialize(x) for m, x in enumerate(powers)},
        "sixth_power_of_product": serialize(sixth),
        "verdicts": verdicts,
        "matches_fixture": matches,
    }


def _integer_case() -> dict:
    """In Z with p = q = 1: p - q = 0 is Drazin invertible, p + q = 2 is not."""
    p = q = 1
    zero = integer_drazin(p - q)
    try:
        integer_drazin(p + q)
        two_invertible = True
    except NotDrazinInvertible:
        two_invertible = False
    census = calc.sigma_census(calc.IdempotentPair(p, q, IntegerRing()))
    verdicts = {
        "p-q_drazin_invertible": True,
        "p+q_drazin_invertible": two_invertible,
        "sigma_all_invertible": census.all_invertible,
    }
    expected = {
        "p-q_drazin_invertible": True,
        "p+q_drazin_invertible": False,
        "sigma_all_invertible": True,
    }
    matches = verdicts == expected and zero.d == 0 and zero.index == 1
    return {
        "case": "Z",
        "p": "1",
        "q": "1",
        "elements": {
            "p-q": str(p - q),
            "(p-q)^D": str(zero.d),
            "ind(p-q)": zero.index,
            "p+q": str(p + q),
            "(p+q)^D": "NotDrazinInvertible",
            "sigma": {k: str(v) for k, v in census.members.items()},
        },
        "verdicts": verdicts,
        "matches_fixture": matches,
    }


def counterexample() -> dict:
    cases = [_matrix_case(), _integer_case()]
    return {"cases": cases, "pass": all(c["matches_fixture"] for c in cases)}
