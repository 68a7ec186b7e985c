"""Registry of named lattice checks, B-field sweeps and report assembly."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional

from . import k3
from .errors import UnknownCheckError
from .forms import (
    FiniteQuadraticForm,
    TorsionElement,
    element_sum,
    form_isomorphism,
    negate,
    subgroup_invariants,
)
from .k3 import (
    DEFAULT_PARAMS,
    E4,
    FIBER,
    H_MUKAI,
    MUKAI_CONVENTION,
    PICARD,
    PICARD_H,
    S_MUKAI,
    BFieldParams,
    ConcreteBField,
    MukaiVector,
    brauer_restrict,
    mukai_complement,
    realize_bfield,
    transcendental_models,
    twisted_algebraic_lattice,
    twisted_generators,
    twisted_gram,
)
from .lattice import (
    Embedding,
    Lattice,
    Overlattice,
    RationalFunctional,
    cyclic_functional,
    is_isometry,
    kernel_sublattice,
    overlattices_of_index,
    rescale,
    sublattice_intersection,
)
from .linalg import IntMat, Matrix, determinant, inverse
from .mukai_maps import (
    H_PRIME_READINGS,
    K_S_READINGS,
    corollary_images,
    fano_picard_images,
    h_prime,
    image_gram,
    k4,
    k_s,
    map_matrix,
    solve_h_orthogonal,
)

SUITE_VERSION = "1.0.0"
STATUSES = ("pass", "fail", "ambiguous", "skipped")
SWEEP_CHECKS = (
    "twisted-alg-16",
    "disc-group-z4z4",
    "complement-duality",
    "appB-solve-w",
    "appB-corollary-isometry",
)
RELIFT_COUNT = 100


@dataclass(frozen=True)
class SweepConfig:
    samples: int = 100
    seed: int = 0
    bound: int = 9

    def __post_init__(self):
        if self.samples < 0:
            raise ValueError("sample count must be nonnegative")
        if self.bound < 1:
            raise ValueError("numerator bound must be at least 1")


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str
    claim: str
    witness: dict
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")
        if self.status == "ambiguous":
            readings = self.witness.get("readings", {})
            if len(readings) < 2 or not any(r["status"] == "pass" for r in readings.values()):
                raise ValueError("ambiguous results need two readings with at least one passing")

    @property
    def ok(self) -> bool:
        return self.status != "fail"


@dataclass(frozen=True)
class Report:
    version: str
    convention: str
    config: SweepConfig
    results: tuple[CheckResult, ...]
    sweep: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "pass" if all(r.ok for r in self.results) else "fail"

    def to_json(self) -> dict:
        return {
            "version": self.version,
            "convention": self.convention,
            "config": self.config,
            "results": list(self.results),
            "sweep": self.sweep,
            "status": self.status,
        }


# -- sampling and cached pipelines ------------------------------------------------------


def sample_params(config: SweepConfig) -> list[BFieldParams]:
    """Admissible triples with odd numerators in ``[-bound, bound]``, seeded."""
    rng = random.Random(config.seed)
    odd = [n for n in range(-config.bound, config.bound + 1) if n % 2]
    return [BFieldParams(*(Fraction(rng.choice(odd), 2) for _ in range(3))) for _ in range(config.samples)]


def _params_json(p: BFieldParams) -> list:
    return list(p.as_tuple())


@lru_cache(maxsize=None)
def _alg_form(b: ConcreteBField) -> FiniteQuadraticForm:
    return twisted_algebraic_lattice(b).sublattice.discriminant.form


@lru_cache(maxsize=None)
def _tx_lattice(b: ConcreteBField) -> Lattice:
    return transcendental_models(b).t_x.sublattice


def _default_b() -> ConcreteBField:
    return realize_bfield(DEFAULT_PARAMS)


def _result(name: str, ok: bool, witness: dict, notes=()) -> CheckResult:
    return CheckResult(name, "pass" if ok else "fail", CLAIMS[name], witness, tuple(notes))


def _reading_result(name: str, readings: dict, witness: dict, notes=()) -> CheckResult:
    passing = [k for k, v in readings.items() if v["status"] == "pass"]
    if len(passing) == len(readings):
        status = "pass"
    elif passing:
        status = "ambiguous"
    else:
        status = "fail"
    witness = dict(witness, readings=readings, passing_readings=passing)
    return CheckResult(name, status, CLAIMS[name], witness, tuple(notes))


def _skipped(name: str) -> CheckResult:
    return CheckResult(name, "skipped", CLAIMS[name], {"samples": 0}, ("sweep-dependent check with zero samples",))


def _sweep(name: str, config: SweepConfig, per_sample: Callable[[ConcreteBField], Optional[str]], extra=None) -> CheckResult:
    """Run ``per_sample`` on every sampled B-field; it returns None or a failure reason."""
    params = sample_params(config)
    if not params:
        return _skipped(name)
    failures = []
    for p in params:
        reason = per_sample(realize_bfield(p))
        if reason is not None:
            failures.append({"params": _params_json(p), "reason": reason})
    witness = {"samples": len(params), "passed": len(params) - len(failures), "failures": failures}
    if extra:
        witness.update(extra)
    return _result(name, not failures, witness)


# -- individual checks ---------------------------------------------------------------------


def check_pic_disc(config: SweepConfig) -> CheckResult:
    gram = PICARD.sublattice.gram
    det = PICARD.sublattice.determinant
    orders = PICARD.sublattice.discriminant.form.orders
    ok = gram == IntMat([[2, 0], [0, -2]]) and det == -4 and PICARD.is_primitive
    return _result("pic-disc", ok, {"gram": gram, "determinant": det, "primitive": PICARD.is_primitive, "group": orders})


def check_fiber_isotropic(config: SweepConfig) -> CheckResult:
    f = FIBER.basis.row(0)
    h, s = PICARD.basis.row(0), PICARD.basis.row(1)
    fsq = FIBER.sublattice.gram[0, 0]
    ok = fsq == 0 and f == tuple(a - b for a, b in zip(h, s)) and FIBER.is_primitive
    return _result(
        "fiber-isotropic",
        ok,
        {"f_squared": fsq, "f_dot_h": k3.k3_pair(f, h), "primitive": FIBER.is_primitive, "degenerate": not FIBER.sublattice.is_nondegenerate},
    )


def check_residue_invariance(config: SweepConfig) -> CheckResult:
    rng = random.Random(f"relift:{config.seed}")
    b = _default_b()
    models = transcendental_models(b)
    failures = []
    for _ in range(RELIFT_COUNT):
        u = [rng.randint(-3, 3) for _ in range(k3.K3_RANK)]
        kk, ll = rng.randint(-5, 5), rng.randint(-5, 5)
        b2 = b.shifted(u, kk, ll)
        p = b2.params
        alpha2 = RationalFunctional(tuple(b2.pair(row) for row in models.t_s.basis.rows))
        if not p.is_admissible or alpha2.values != models.alpha.values:
            failures.append({"u": u, "k": kk, "l": ll, "params": _params_json(p)})
    return _result(
        "residue-invariance",
        not failures,
        {"relifts": RELIFT_COUNT, "failures": failures, "base_params": _params_json(b.params)},
        ["the functional B.(-) mod 1 on T_S is also unchanged"],
    )


def check_twisted_alg_16(config: SweepConfig) -> CheckResult:
    def one(b):
        alg = twisted_algebraic_lattice(b)
        gens = twisted_generators(b)
        if alg.rank != 4 or abs(alg.sublattice.determinant) != 16:
            return f"determinant {alg.sublattice.determinant}"
        if not gens.same_span(alg):
            return "named generators do not span the saturated lattice"
        if gens.sublattice.gram != twisted_gram(b.params):
            return "generator Gram differs from the closed form"
        if not all(alg.contains(v.coords) for v in (H_MUKAI, S_MUKAI, E4)):
            return "missing h, s or e4"
        return None

    return _sweep("twisted-alg-16", config, one, {"default_gram": twisted_gram(DEFAULT_PARAMS)})


def check_disc_group_z4z4(config: SweepConfig) -> CheckResult:
    def one(b):
        a, t = _alg_form(b).orders, _tx_lattice(b).discriminant.form.orders
        return None if a == (4, 4) and t == (4, 4) else f"orders {a} and {t}"

    return _sweep("disc-group-z4z4", config, one)


def _find_generators(f: FiniteQuadraticForm, use_q: bool) -> Optional[tuple[TorsionElement, TorsionElement]]:
    half, three_quarters = Fraction(1, 2), Fraction(3, 4)
    cands = [x for x in f.elements() if x.order == 4 and (f.qvalue(x) if use_q else f.bvalue(x, x)) == half]
    for x, y in itertools.product(cands, repeat=2):
        if f.bvalue(x, y) == three_quarters and subgroup_invariants([x, y]) == f.orders:
            return x, y
    return None


def check_disc_form_matrix(config: SweepConfig) -> CheckResult:
    b = _default_b()
    forms = {"twisted_algebraic": _alg_form(b), "t_x_model": _tx_lattice(b).discriminant.form}
    readings = {}
    for reading, use_q in (("diagonal-is-q", True), ("diagonal-is-b", False)):
        found = {name: _find_generators(f, use_q) for name, f in forms.items()}
        readings[reading] = {
            "status": "pass" if all(found.values()) else "fail",
            "generators": {k: None if v is None else [list(v[0].coeffs), list(v[1].coeffs)] for k, v in found.items()},
        }
    alg = forms["twisted_algebraic"]
    witness = {"orders": alg.orders, "snf_b": alg.b, "snf_q": alg.q}
    return _reading_result("disc-form-matrix", readings, witness, ["q(x) = 1/2 forces b(x, x) = 1/2, so the q reading implies the b reading"])


def check_complement_duality(config: SweepConfig) -> CheckResult:
    def one(b):
        comp = mukai_complement(b)
        if comp.rank != 20 or abs(comp.sublattice.determinant) != 16:
            return f"complement rank {comp.rank}, det {comp.sublattice.determinant}"
        neg = negate(_alg_form(b))
        cform = comp.sublattice.discriminant.form
        tform = _tx_lattice(b).discriminant.form
        if form_isomorphism(cform, neg) is None:
            return "complement form is not -q of the twisted algebraic lattice"
        if form_isomorphism(tform, neg) is None:
            return "kernel model form is not -q of the twisted algebraic lattice"
        if form_isomorphism(tform, cform) is None:
            return "kernel model and complement forms differ"
        return None

    res = _sweep("complement-duality", config, one)
    if res.status != "skipped":
        res.witness["cross_validated"] = res.witness["passed"]
    return res


def check_fano_kernel_chain(config: SweepConfig) -> CheckResult:
    m = transcendental_models(_default_b())
    ds, dx = m.t_s.sublattice.determinant, m.t_x.sublattice.determinant
    ok = m.t_s.rank == 20 and abs(ds) == 4 and m.index == 2 and abs(dx) == 16 and dx == ds * m.index**2
    return _result("fano-kernel-chain", ok, {"t_s_det": ds, "index": m.index, "t_x_det": dx, "t_s_primitive": m.t_s.is_primitive})


def check_alpha_nontrivial(config: SweepConfig) -> CheckResult:
    m = transcendental_models(_default_b())
    witness_vec = next(i for i, v in enumerate(m.alpha.values) if v % 1)
    return _result(
        "alpha-nontrivial",
        m.alpha.order == 2,
        {"order": m.alpha.order, "basis_index": witness_vec, "value": m.alpha.values[witness_vec]},
    )


@lru_cache(maxsize=None)
def _overlattice_data(b: ConcreteBField):
    tx = _tx_lattice(b)
    four = overlattices_of_index(tx, 4)
    two = overlattices_of_index(tx, 2)
    return tx, four, two


def _in_common_ambient(top: Overlattice, sub: Overlattice) -> Embedding:
    return Embedding(top.lattice, IntMat((sub.coordinates @ inverse(top.coordinates)).tolist()))


def check_overlattice_unique_4(config: SweepConfig) -> CheckResult:
    tx, four, _ = _overlattice_data(_default_b())
    form = tx.discriminant.form
    doubled = sorted({(2 * x).coeffs for x in form.elements()})
    ok = (
        len(four) == 1
        and four[0].quotient == (2, 2)
        and sorted(x.coeffs for x in four[0].subgroup.elements) == doubled
        and four[0].lattice.is_even
        and abs(four[0].lattice.determinant) == abs(tx.determinant) // 16
    )
    return _result(
        "overlattice-unique-4",
        ok,
        {
            "count": len(four),
            "quotient": four[0].quotient if four else None,
            "subgroup": [list(c) for c in doubled],
            "overlattice_det": four[0].lattice.determinant if four else None,
        },
    )


def _tx_to_ts_subgroup(b: ConcreteBField):
    """The isotropic subgroup cut out by the inclusion of the kernel model in T_S."""
    m = transcendental_models(b)
    tx = m.t_x.sublattice
    ts_coords = inverse(m.t_x.basis)
    disc = tx.discriminant
    classes = {disc.class_of(r) for r in ts_coords.rows}
    return frozenset(classes | {disc.form.zero()})


def check_overlattice_three_2(config: SweepConfig) -> CheckResult:
    b = _default_b()
    tx, _, two = _overlattice_data(b)
    from_ts = _tx_to_ts_subgroup(b)
    matches = [i for i, o in enumerate(two) if frozenset(o.subgroup.elements) == from_ts]
    dets = [o.lattice.determinant for o in two]
    ok = len(two) == 3 and all(o.lattice.is_even and abs(d) == 4 for o, d in zip(two, dets)) and len(matches) == 1
    return _result(
        "overlattice-three-2",
        ok,
        {"count": len(two), "determinants": dets, "t_s_is_overlattice": matches},
    )


def _betas(b: ConcreteBField):
    _, four, two = _overlattice_data(b)
    top = four[0]
    subs = [_in_common_ambient(top, o) for o in two]
    return top, subs, [cyclic_functional(e) for e in subs]


def check_beta_product(config: SweepConfig) -> CheckResult:
    b = _default_b()
    _, _, two = _overlattice_data(b)
    elems = [o.subgroup.nonzero()[0] for o in two]
    sums_ok = all(element_sum(elems[i], elems[j]) == elems[3 - i - j] for i, j in ((0, 1), (0, 2), (1, 2)))
    _, _, betas = _betas(b)
    func_ok = all((betas[i] + betas[j]).values == betas[3 - i - j].values for i, j in ((0, 1), (0, 2), (1, 2)))
    orders = [beta.order for beta in betas]
    return _result(
        "beta-product",
        sums_ok and func_ok and orders == [2, 2, 2],
        {"elements": [list(x.coeffs) for x in elems], "functional_orders": orders, "element_sums": sums_ok, "functional_sums": func_ok},
    )


def check_diagram_intersection(config: SweepConfig) -> CheckResult:
    b = _default_b()
    top, subs, _ = _betas(b)
    base = top.embedding
    pairs = {}
    for i, j in ((0, 1), (0, 2), (1, 2)):
        inter = sublattice_intersection(subs[i], subs[j])
        pairs[f"{i}{j}"] = inter.same_span(base)
    contained = all(abs(determinant(s.basis)) == 2 for s in subs)
    return _result("diagram-intersection", all(pairs.values()) and contained, {"pairs": pairs, "index_two_embeddings": contained})


def check_restriction_classes(config: SweepConfig) -> CheckResult:
    b = _default_b()
    top, subs, betas = _betas(b)
    _, _, two = _overlattice_data(b)
    table = {}
    ok = True
    for i, j in itertools.product(range(3), repeat=2):
        r = brauer_restrict(betas[j], subs[i])
        kernel, index = kernel_sublattice(subs[i].sublattice, r)
        tx_in_ti = two[i].embedding
        good = r.is_zero if i == j else (r.order == 2 and kernel.same_span(tx_in_ti))
        table[f"r{i}(beta{j})"] = {"order": r.order, "ok": good}
        ok = ok and good

    # Identify T_S with the matching T_i and compare the restriction with alpha itself.
    m = transcendental_models(b)
    from_ts = _tx_to_ts_subgroup(b)
    i0 = next(i for i, o in enumerate(two) if frozenset(o.subgroup.elements) == from_ts)
    change = IntMat((inverse(m.t_x.basis) @ inverse(two[i0].coordinates)).tolist())
    j0 = (i0 + 1) % 3
    r = brauer_restrict(betas[j0], subs[i0])
    transported = RationalFunctional(tuple(sum(c * v for c, v in zip(row, r.values)) for row in change.rows))
    alpha_match = transported.values == m.alpha.values
    alpha_self = brauer_restrict(m.alpha, m.t_x).is_zero
    return _result(
        "restriction-classes",
        ok and alpha_match and alpha_self,
        {"restrictions": table, "t_s_index": i0, "restriction_equals_alpha": alpha_match, "alpha_on_kernel_is_zero": alpha_self},
    )


def _h_form(hr: str) -> str:
    return "c_h = B.h" if hr == "literal" else "c_h = 2 B.h"


def check_solve_w(config: SweepConfig) -> CheckResult:
    params = sample_params(config)
    if not params:
        return _skipped("appB-solve-w")
    tallies = {r: {"status": "pass", "passed": 0, "failures": []} for r in H_PRIME_READINGS}
    for p in params:
        b = realize_bfield(p)
        sols = solve_h_orthogonal(b, 6, 4, picard=PICARD_H)
        unique = sols.exhaustive and len(sols.solutions) == 1
        for r in H_PRIME_READINGS:
            hp, kf = h_prime(b, r), k4(b, r)
            good = (
                unique
                and hp.is_integral
                and hp.pair(H_MUKAI) == 0
                and kf.denominator == 1
                and sols.solutions[0] == hp + kf * E4
            )
            t = tallies[r]
            if good:
                t["passed"] += 1
            elif len(t["failures"]) < 3:
                t["failures"].append(
                    {"params": _params_json(p), "h_prime_integral": hp.is_integral, "h_prime_dot_h": hp.pair(H_MUKAI), "k4": kf}
                )
    for r, t in tallies.items():
        t["status"] = "pass" if t["passed"] == len(params) else "fail"
        t["formula"] = _h_form(r)

    b = _default_b()
    family = solve_h_orthogonal(b, 6, 4)
    hp = h_prime(b)
    # w = h' + c s + t e4, so w.s = h'.s - 2c
    s_coeffs = [Fraction(hp.pair(S_MUKAI) - w.pair(S_MUKAI), 2) for w in family.solutions]
    witness = {
        "samples": len(params),
        "one_plane_lattice_gram": _one_plane_gram(b),
        "two_plane_family": {
            "exhaustive": family.exhaustive,
            "listed": len(family.solutions),
            "s_coefficients": s_coeffs,
            "canonical_member_present": (hp + k4(b) * E4) in family.solutions,
        },
    }
    notes = [
        "solved in h-perp of <2e0+2B, h, e4>; the solution there is unique",
        "with s adjoined the solutions are h' + b s + c e4 with b even, an infinite family; b = 0 is the listed formula",
    ]
    return _reading_result("appB-solve-w", tallies, witness, notes)


def _one_plane_gram(b: ConcreteBField) -> Matrix:
    return solve_h_orthogonal(b, 6, 4, picard=PICARD_H).lattice.sublattice.gram


def _fano_eval(b: ConcreteBField, hr: str, kr: str) -> Optional[str]:
    img = fano_picard_images(b, hr, kr)
    vecs = (img.g, img.f1, img.f2, img.f3)
    if not all(v.is_integral for v in vecs):
        return "non-integral image"
    alg = twisted_algebraic_lattice(b)
    if not all(alg.contains(v.coords) for v in vecs):
        return "image outside the twisted algebraic lattice"
    if any(v.pair(H_MUKAI) != 0 for v in vecs):
        return "image not orthogonal to h"
    if img.g - img.f1 != E4 or img.f2 + img.f3 != E4:
        return "linear relations fail"
    g, f1 = img.g, img.f1
    if g.square != 6 or g.pair(g - f1) != 4 or (g - f1).square != 0:
        return "intersection numbers fail"
    return None


def check_fano_pic(config: SweepConfig) -> CheckResult:
    bs = [_default_b()] + [realize_bfield(p) for p in sample_params(config)]
    readings = {}
    for hr, kr in itertools.product(H_PRIME_READINGS, K_S_READINGS):
        fails = [(b, r) for b in bs for r in [_fano_eval(b, hr, kr)] if r]
        readings[f"h':{hr},k_s:{kr}"] = {
            "status": "pass" if not fails else "fail",
            "passed": len(bs) - len(fails),
            "first_failure": None if not fails else {"params": _params_json(fails[0][0].params), "reason": fails[0][1]},
        }
    b = _default_b()
    img = fano_picard_images(b)
    pulled = image_gram((img.g, img.f1, img.f2))
    witness = {
        "lifts": len(bs),
        "gram_g_f1_f2": pulled,
        "f2_minus_f3_dot_s": (img.f2 - img.f3).pair(S_MUKAI),
        "k_s": k_s(b),
        "k4": k4(b),
    }
    notes = ["(F2 - F3).s evaluates to 4 = -2 s^2 with these images, not 8"]
    return _reading_result("appB-fano-pic", readings, witness, notes)


def _corollary_eval(b2: ConcreteBField, p1: Optional[BFieldParams], hr: str, kr: str) -> tuple[Optional[str], Optional[BFieldParams]]:
    imgs = corollary_images(b2, hr, kr)
    if not all(v.is_integral for v in imgs):
        return "non-integral image", None
    m = map_matrix(b2, imgs)
    if m is None:
        return "image outside the target lattice", None
    gram = image_gram(imgs)
    if p1 is None:
        p1 = BFieldParams(Fraction(gram[0][0], 4), Fraction(gram[0][1], 2), Fraction(gram[0][2], 2))
        if not p1.is_admissible:
            return "source parameters read off the images are not admissible", p1
        if twisted_generators(realize_bfield(p1)).sublattice.gram != twisted_gram(p1):
            return "source lift does not realize the parameters", p1
    source, target = Lattice(twisted_gram(p1)), Lattice(twisted_gram(b2.params))
    if not is_isometry(m, source, target):
        return "pairings not preserved", p1
    if abs(source.determinant) != 16 or abs(target.determinant) != 16:
        return "unexpected determinants", p1
    return None, p1


def check_corollary_isometry(config: SweepConfig) -> CheckResult:
    params = sample_params(config)
    if not params:
        return _skipped("appB-corollary-isometry")
    readings = {}
    for hr, kr, coupling in itertools.product(H_PRIME_READINGS, K_S_READINGS, ("coupled", "independent")):
        passed, first = 0, None
        for i, p2 in enumerate(params):
            p1 = None if coupling == "coupled" else params[(i + 1) % len(params)]
            reason, used = _corollary_eval(realize_bfield(p2), p1, hr, kr)
            if reason is None:
                passed += 1
            elif first is None:
                first = {"b2": _params_json(p2), "b1": None if used is None else _params_json(used), "reason": reason}
        readings[f"h':{hr},k_s:{kr},B1:{coupling}"] = {
            "status": "pass" if passed == len(params) else "fail",
            "passed": passed,
            "first_failure": first,
        }
    b = _default_b()
    imgs = corollary_images(b)
    witness = {"samples": len(params), "default_map": map_matrix(b, imgs), "default_image_gram": image_gram(imgs)}
    notes = [
        "coupled: B1 parameters are read off the image Gram; they are always admissible and realizable",
        "independent: B1 taken from the next sampled triple; the map is then an isometry only by coincidence",
    ]
    return _reading_result("appB-corollary-isometry", readings, witness, notes)


def _explicit_moduli_vector(b2: ConcreteBField, hr: str, kr: str) -> MukaiVector:
    ch = (1 if hr == "literal" else 2) * b2.params.bh
    kf, ks = k4(b2, hr), k_s(b2, kr)
    four_b = MukaiVector(4, tuple(4 * x for x in b2.vector), 0)
    return four_b - ch * H_MUKAI - S_MUKAI - Fraction(2 * kf + ks - 1, 2) * E4


def check_moduli_vector(config: SweepConfig) -> CheckResult:
    bs = [_default_b()] + [realize_bfield(p) for p in sample_params(config)]
    readings = {}
    for hr, kr in itertools.product(H_PRIME_READINGS, K_S_READINGS):
        passed, first = 0, None
        for b in bs:
            v = _explicit_moduli_vector(b, hr, kr)
            reason = None
            if not v.is_integral:
                reason = "non-integral"
            elif not twisted_algebraic_lattice(b).contains(v.coords):
                reason = "outside the twisted algebraic lattice"
            elif v.square % 2 or v.square < -2:
                reason = f"square {v.square}"
            elif v != -corollary_images(b, hr, kr)[3]:
                reason = "differs from minus the image of e4"
            if reason is None:
                passed += 1
            elif first is None:
                first = {"params": _params_json(b.params), "reason": reason}
        readings[f"h':{hr},k_s:{kr}"] = {"status": "pass" if passed == len(bs) else "fail", "passed": passed, "first_failure": first}
    v = _explicit_moduli_vector(_default_b(), "doubled", "doubled")
    return _reading_result("appB-moduli-vector", readings, {"lifts": len(bs), "default_vector": v.coords, "square": v.square})


def check_half_pairing_rescale(config: SweepConfig) -> CheckResult:
    b = _default_b()
    top, subs, _ = _betas(b)
    tx = _tx_lattice(b)
    doubled = rescale(top.lattice, 2)
    outcomes = {}
    for i, j in ((0, 1), (0, 2), (1, 2)):
        e1, e2 = Embedding(doubled, subs[i].basis), Embedding(doubled, subs[j].basis)
        inter = sublattice_intersection(e1, e2)
        halved = rescale(inter.sublattice, Fraction(1, 2))
        iso = form_isomorphism(halved.discriminant.form, tx.discriminant.form) is not None
        outcomes[f"{i}{j}"] = {
            "even": halved.is_even,
            "det": halved.determinant,
            "matches_kernel_model": iso and inter.same_span(Embedding(doubled, top.embedding.basis)),
        }
    ok = all(o["even"] and abs(o["det"]) == 16 and o["matches_kernel_model"] for o in outcomes.values())
    return _result("half-pairing-rescale", ok, {"pairs": outcomes})


CLAIMS = {
    "pic-disc": "Gram(h, s) = diag(2, -2), det = -4",
    "fiber-isotropic": "f = h - s, f^2 = 0",
    "residue-invariance": "2B^2, 2B.h, 2B.s stay odd under B -> B + u + (k h + l s)/2",
    "twisted-alg-16": "|det <2e0+2B, h, s, e4>| = 16",
    "disc-group-z4z4": "A = Z/4 + Z/4",
    "disc-form-matrix": "generators with form matrix (1/2, 3/4; 3/4, 1/2)",
    "complement-duality": "q(Mukai complement) = -q(twisted algebraic lattice)",
    "fano-kernel-chain": "|disc T_S| = 4, [T_S : T_X] = 2, |disc T_X| = 16",
    "alpha-nontrivial": "alpha = B.(-) mod 1 has order 2 on T_S",
    "overlattice-unique-4": "unique even index-4 overlattice of T_X, quotient Z/2 + Z/2",
    "overlattice-three-2": "exactly three even index-2 overlattices of T_X",
    "beta-product": "beta_1 + beta_2 = beta_3",
    "diagram-intersection": "T_i and T_j meet in T_X for i != j",
    "restriction-classes": "beta_j restricted to T_i (i != j) has kernel T_X and equals alpha on T_S",
    "appB-solve-w": "w in h-perp, w^2 = 6, w.e4 = 4 gives w = h' + k4 e4 with k4 = (6 - h'^2)/8 in Z",
    "appB-fano-pic": "g - F1 = e4, F2 + F3 = e4, g^2 = 6, g.(g - F1) = 4",
    "appB-corollary-isometry": "the explicit 4x4 map carries one twisted Gram matrix to the other",
    "appB-moduli-vector": "4e0 + 4B2 - c_h h - s - ((2k4 + k_s - 1)/2) e4 is integral with even square >= -2",
    "half-pairing-rescale": "(T_i(2) meet T_j(2))(1/2) is even with |disc| = 16",
}

REGISTRY: dict[str, Callable[[SweepConfig], CheckResult]] = {
    "pic-disc": check_pic_disc,
    "fiber-isotropic": check_fiber_isotropic,
    "residue-invariance": check_residue_invariance,
    "twisted-alg-16": check_twisted_alg_16,
    "disc-group-z4z4": check_disc_group_z4z4,
    "disc-form-matrix": check_disc_form_matrix,
    "complement-duality": check_complement_duality,
    "fano-kernel-chain": check_fano_kernel_chain,
    "alpha-nontrivial": check_alpha_nontrivial,
    "overlattice-unique-4": check_overlattice_unique_4,
    "overlattice-three-2": check_overlattice_three_2,
    "beta-product": check_beta_product,
    "diagram-intersection": check_diagram_intersection,
    "restriction-classes": check_restriction_classes,
    "appB-solve-w": check_solve_w,
    "appB-fano-pic": check_fano_pic,
    "appB-corollary-isometry": check_corollary_isometry,
    "appB-moduli-vector": check_moduli_vector,
    "half-pairing-rescale": check_half_pairing_rescale,
}


def run_check(name: str, config: SweepConfig = SweepConfig()) -> CheckResult:
    try:
        fn = REGISTRY[name]
    except KeyError:
        raise UnknownCheckError(f"unknown check {name!r}; known checks: {', '.join(sorted(REGISTRY))}") from None
    return fn(config)


def _sweep_fragment(config: SweepConfig, results: dict[str, CheckResult]) -> dict:
    if not config.samples:
        return {}
    checks = {}
    for name in SWEEP_CHECKS:
        if name in results:
            r = results[name]
            checks[name] = {"status": r.status, "samples": r.witness.get("samples")}
    return {"params": [_params_json(p) for p in sample_params(config)], "checks": checks}


def sweep_bfields(config: SweepConfig = SweepConfig()) -> dict:
    return _sweep_fragment(config, {n: run_check(n, config) for n in SWEEP_CHECKS})


def run_all(config: SweepConfig = SweepConfig(), names=None) -> Report:
    names = sorted(REGISTRY) if names is None else sorted(names)
    results = {n: run_check(n, config) for n in names}
    return Report(
        SUITE_VERSION,
        MUKAI_CONVENTION,
        config,
        tuple(results[n] for n in names),
        _sweep_fragment(config, results),
    )
