"""Experiment harness: instance files, preprocessing, seeded generators, the
scaling study, the log-concavity certificate, and the end-to-end audit
pipeline.

Every random stream is derived from (master seed, generator id, n, trial
index) through the stdlib Mersenne Twister seeded with a string, so any
single trial reproduces in isolation and CSV output is byte-identical across
runs up to the elapsed-time column.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, log

from . import jsonio
from .apcore import APDescriptor, gcd_bound_audit, reduce_ap
from .cyclelab import (
    cycle_identity_check,
    cycle_poly,
    divisibility_audit,
    enumerate_even_cycles,
    find_even_cycle,
)
from .errors import CapacityError, FalsificationError, InputError
from .exactnum import QuadElem
from .irregular import irregularity_report
from .prodset import build_rep_graph, longest_ap, product_set
from .rationalize import (
    QuadInstance,
    four_cycle_exists_audit,
    four_cycle_r_rotations,
    make_quad_instance,
    rationalize_components,
)

RNG_NAME = "mt19937-string-seeded"
AP_SHRINK_FACTOR = 2  # taking absolute values can at worst halve a progression

CSV_COLUMNS = (
    "generator",
    "n",
    "set_size",
    "prodset_size",
    "ap_length",
    "ratio_len_over_nlogn",
    "seed",
    "trial",
    "elapsed_ms",
)


# ---------------------------------------------------------------------------
# instance files
# ---------------------------------------------------------------------------


@dataclass
class InstanceFile:
    """On-disk instance: a field tag, the element list, an optional claimed
    progression, and free-form provenance."""

    field_tag: str  # "integer" | "rational" | "quadratic"
    elements: list
    m: int | None = None
    ap: APDescriptor | None = None
    provenance: dict = field(default_factory=dict)


def instance_to_json(inst: InstanceFile) -> dict:
    return {
        "field": inst.field_tag,
        "m": jsonio.enc_int(inst.m) if inst.m is not None else None,
        "elements": [jsonio.enc_value(x, with_m=False) for x in inst.elements],
        "ap": jsonio.descriptor_to_json(inst.ap) if inst.ap is not None else None,
        "provenance": inst.provenance,
    }


def instance_from_json(obj) -> InstanceFile:
    if not isinstance(obj, dict) or "field" not in obj or "elements" not in obj:
        raise InputError("instance file needs 'field' and 'elements'")
    tag = obj["field"]
    m = jsonio.dec_int(obj["m"]) if obj.get("m") is not None else None
    if tag == "quadratic" and m is None:
        raise InputError("quadratic instance without top-level m")
    decode = {
        "integer": jsonio.dec_int,
        "rational": jsonio.dec_rat,
        "quadratic": lambda e: jsonio.dec_quad(e, m),
    }.get(tag)
    if decode is None:
        raise InputError(f"unknown field tag {tag!r}")
    elements = [decode(e) for e in obj["elements"]]
    if len(set(elements)) != len(elements):
        raise InputError("instance elements must be distinct")
    ap = jsonio.descriptor_from_json(obj["ap"]) if obj.get("ap") else None
    return InstanceFile(tag, elements, m, ap, obj.get("provenance") or {})


def load_instance(path) -> InstanceFile:
    return instance_from_json(jsonio.load_json(path))


def save_instance(path, inst: InstanceFile) -> None:
    jsonio.save_json(path, instance_to_json(inst))


# ---------------------------------------------------------------------------
# preprocessing
# ---------------------------------------------------------------------------


def absolutize(B) -> tuple[list, int]:
    """Absolute values, deduplicated and sorted; the second component is the
    worst-case factor by which the longest progression may shrink."""
    out = set()
    for b in B:
        if b == 0:
            raise InputError("zero element makes products degenerate")
        out.add(-b if b < 0 else b)
    return sorted(out), AP_SHRINK_FACTOR


def integerize(B) -> tuple[list[int], int]:
    """Clear denominators: scale = lcm of denominators, output scale * B in
    input order.  Progressions in B.B map to progressions scaled by scale**2."""
    fracs = [Fraction(b) for b in B]
    if any(f <= 0 for f in fracs):
        raise InputError("integerize needs positive rationals")
    scale = 1
    for f in fracs:
        scale = scale * f.denominator // gcd(scale, f.denominator)
    return [int(f * scale) for f in fracs], scale


@dataclass(frozen=True)
class ConcavityReport:
    concave: bool
    margins: tuple[int, ...]


def concavity_demo(desc: APDescriptor) -> ConcavityReport:
    """Certify that logs of the terms are strictly concave via the exact
    cross-multiplication test term(i+1)**2 > term(i)*term(i+2); each margin
    equals D**2 * d**2."""
    terms = desc.terms()
    margins = tuple(
        terms[i + 1] ** 2 - terms[i] * terms[i + 2] for i in range(desc.L - 2)
    )
    return ConcavityReport(all(m > 0 for m in margins), margins)


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def _trial_rng(seed: int, generator: str, n: int, trial: int) -> random.Random:
    return random.Random(f"{seed}:{generator}:{n}:{trial}")


def gen_cover(n: int) -> list[int]:
    """The dense cover set: [1..n] plus the primes up to floor(n*ln n)."""
    from .construct import cover_set

    return list(cover_set(n).elements)


def gen_random(n: int, rng: random.Random) -> list[int]:
    """n distinct integers from [1, 10n]."""
    return sorted(rng.sample(range(1, 10 * n + 1), n))


def gen_smooth(n: int) -> list[int]:
    """The n smallest integers of the form 2**a * 3**b."""
    out = [1]
    i2 = i3 = 0
    while len(out) < n:
        n2, n3 = 2 * out[i2], 3 * out[i3]
        nxt = min(n2, n3)
        out.append(nxt)
        if n2 == nxt:
            i2 += 1
        if n3 == nxt:
            i3 += 1
    return out


GENERATORS = ("cover", "random", "smooth")


def build_set(generator: str, n: int, rng: random.Random) -> list[int]:
    if generator == "cover":
        return gen_cover(n)
    if generator == "random":
        return gen_random(n, rng)
    if generator == "smooth":
        return gen_smooth(n)
    raise InputError(f"unknown generator {generator!r}; choose from {GENERATORS}")


def quadratic_demo_instance(m: int = 2, gamma=Fraction(1, 2)) -> QuadInstance:
    """A canonical Q(sqrt(m)) instance: five pure surds whose product set
    carries the progression [2..6] through a genuine 4-cycle."""
    g = Fraction(gamma)
    if g == 0:
        raise InputError("gamma must be nonzero")
    b1 = QuadElem(Fraction(0), g, m)
    elements = [b1, 2 / b1, 2 * b1, 3 / b1, 5 / b1]
    targets = [Fraction(t) for t in range(2, 7)]
    inst = make_quad_instance(elements, targets, m)
    cyc = find_even_cycle(inst.graph, 2)
    if cyc is None or len(cyc.vertices) != 4:
        raise InputError(f"gamma={g} degenerates the built-in 4-cycle; pick another")
    return inst


def random_quad_chain_instance(seed: int, m: int) -> QuadInstance:
    """Seeded chain instance: consecutive targets share an element, so the
    graph is connected and parity arguments bite."""
    rng = random.Random(f"quad-chain:{seed}:{m}")
    while True:
        L = rng.randint(4, 7)
        start = Fraction(rng.randint(2, 9), rng.choice([1, 2]))
        targets = [start + i for i in range(L)]
        coeff = Fraction(rng.randint(1, 7), rng.randint(1, 5))
        b = QuadElem(Fraction(0), coeff, m)
        elements = [b]
        ok = True
        for t in targets:
            b = QuadElem.from_rational(t, m) / b
            if b in elements or b.is_zero:
                ok = False
                break
            elements.append(b)
        if not ok:
            continue
        return make_quad_instance(elements, targets, m)


def random_quad_cycle_instance(seed: int, m: int) -> QuadInstance:
    """Seeded instance guaranteed to contain a 4-cycle (progression [2..6]
    split across the surd with a random leading coefficient)."""
    rng = random.Random(f"quad-cycle:{seed}:{m}")
    while True:
        g = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        try:
            return quadratic_demo_instance(m, g)
        except InputError:
            continue


def demo_instance_file(kind: str, seed: int = 0) -> InstanceFile:
    """Built-in instances for the pipeline: the n=100 cover set with its
    interval progression, or the quadratic 4-cycle demo."""
    if kind == "cover100":
        from .construct import cover_set

        res = cover_set(100)
        return InstanceFile(
            "integer",
            list(res.elements),
            ap=APDescriptor(1, 1, 1, res.M),
            provenance={"generator": "cover", "n": 100, "seed": seed},
        )
    if kind == "quad":
        inst = random_quad_cycle_instance(seed, 2)
        return InstanceFile(
            "quadratic",
            list(inst.elements),
            m=2,
            ap=APDescriptor(1, 2, 1, 5),
            provenance={"generator": "quad-cycle", "seed": seed},
        )
    raise InputError(f"unknown demo kind {kind!r}; choose cover100 or quad")


# ---------------------------------------------------------------------------
# scaling study
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExperimentRecord:
    generator: str
    n: int
    set_size: int
    prodset_size: int
    ap_length: int
    ratio: float
    seed: int
    trial: int
    elapsed_ms: int
    skipped: str | None = None


def run_trial(generator: str, n: int, seed: int, trial: int, ap_limit=None) -> ExperimentRecord:
    rng = _trial_rng(seed, generator, n, trial)
    t0 = time.perf_counter()
    B = build_set(generator, n, rng)
    ps = product_set(B)
    try:
        result = longest_ap(list(ps.products), mode="exact", limit=ap_limit)
        length = result.length
        skipped = None
    except CapacityError as exc:
        length = 0
        skipped = str(exc)
    elapsed = int((time.perf_counter() - t0) * 1000)
    ratio = length / (len(B) * log(len(B))) if len(B) > 1 else 0.0
    return ExperimentRecord(
        generator, n, len(B), len(ps), length, ratio, seed, trial, elapsed, skipped
    )


def scaling_study(
    generators, sizes, trials: int, seed: int, ap_limit=None
) -> list[ExperimentRecord]:
    records = []
    for generator in generators:
        if generator not in GENERATORS:
            raise InputError(f"unknown generator {generator!r}")
        for n in sizes:
            for trial in range(trials):
                records.append(run_trial(generator, n, seed, trial, ap_limit))
    records.sort(key=lambda r: (r.generator, r.n, r.trial))
    return records


def study_csv(records) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for r in records:
        lines.append(
            f"{r.generator},{r.n},{r.set_size},{r.prodset_size},{r.ap_length},"
            f"{r.ratio:.9f},{r.seed},{r.trial},{r.elapsed_ms}"
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------------


def _cycle_to_json(cycle) -> dict:
    return {
        "vertices": [[side, idx] for side, idx in cycle.vertices],
        "indices": list(cycle.indices),
    }


def _integer_stages(B: list[int], A: list[int], report: dict, cycle_cap: int = 200) -> None:
    """Shared integer-side audits: reduction, gcd bound, graph, cycles,
    irregularity, concavity."""
    stages = report["stages"]
    B_red, desc, trace = reduce_ap(A, B)
    stages["reduction"] = {
        "descriptor": jsonio.descriptor_to_json(desc),
        "set_size": len(B_red),
        "steps": [
            {"prime": s.prime, "case": s.case, "measure": s.measure} for s in trace.steps
        ],
        "k0_primes": list(trace.k0_primes),
    }
    ok, (i, j, g) = gcd_bound_audit(desc)
    stages["gcd_bound"] = {
        "ok": ok,
        "bound": jsonio.enc_int(desc.D * desc.L),
        "worst": [i, j, jsonio.enc_int(g)],
    }
    if not ok:
        raise FalsificationError(
            "pairwise gcd exceeded D*L on a reduced progression",
            payload=stages["gcd_bound"],
        )
    final_A = desc.terms()
    graph = build_rep_graph(B_red, final_A)
    stages["graph"] = {"vertices": graph.n_vertices, "edges": len(graph.edges)}
    shortest = find_even_cycle(graph, 5)
    audited = []
    for cyc in enumerate_even_cycles(graph, 5, max_count=cycle_cap):
        identity = cycle_identity_check(cyc, final_A)
        if not identity:
            raise FalsificationError(
                "cycle identity failed", payload=_cycle_to_json(cyc)
            )
        poly = cycle_poly(cyc, desc)
        divisibility_audit(poly, desc)
        audited.append(len(cyc.vertices))
    stages["cycles"] = {
        "shortest": _cycle_to_json(shortest) if shortest else None,
        "audited": len(audited),
        "lengths": audited,
        "all_pass": True,
    }
    irr = irregularity_report(graph, desc)
    if irr.forest is not True:
        raise FalsificationError(
            "selected irregular edges contain a cycle",
            payload={
                "window": list(irr.window.primes),
                "selected": [e.index for e in irr.selected],
            },
        )
    stages["irregular"] = {
        "window": list(irr.window.primes),
        "irregular_edges": sum(len(v) for v in irr.per_prime.values()),
        "selected": [e.index for e in irr.selected],
        "forest": irr.forest,
    }
    conc = concavity_demo(desc)
    if not conc.concave or any(m != desc.D**2 * desc.d**2 for m in conc.margins):
        raise FalsificationError(
            "log-concavity margins deviated from D^2*d^2",
            payload={"descriptor": jsonio.descriptor_to_json(desc)},
        )
    stages["concavity"] = {
        "concave": conc.concave,
        "margin": jsonio.enc_int(desc.D**2 * desc.d**2),
    }


def pipeline(inst: InstanceFile, cycle_cap: int = 200) -> dict:
    """Full audit chain for one instance; returns a canonical-JSON-ready
    report.  Falsifications are collected, not raised."""
    report: dict = {
        "instance": {
            "field": inst.field_tag,
            "m": jsonio.enc_int(inst.m) if inst.m is not None else None,
            "size": len(inst.elements),
            "provenance": inst.provenance,
        },
        "stages": {},
        "falsifications": [],
        "ok": True,
    }
    stages = report["stages"]
    try:
        if inst.field_tag == "quadratic":
            if inst.ap is None:
                raise InputError("quadratic instances need a claimed progression")
            desc = inst.ap
            if desc.D != 1 or desc.d != 1:
                raise InputError(
                    "quadratic pipeline expects a difference-1 claim; "
                    "rescale by sqrt(d) first"
                )
            targets = [Fraction(t) for t in desc.terms()]
            qinst = make_quad_instance(inst.elements, targets, inst.m)
            c4 = four_cycle_exists_audit(qinst.graph)
            stages["c4_audit"] = {
                "edges": c4.edges,
                "threshold": c4.threshold,
                "exceeded": c4.exceeded,
                "four_cycle": _cycle_to_json(c4.cycle) if c4.cycle else None,
            }
            if c4.cycle is not None:
                starts = four_cycle_r_rotations(qinst.graph, c4.cycle)
                if any(s != targets[0] for s in starts):
                    raise FalsificationError(
                        "4-cycle start extraction disagreed with the claim",
                        payload={"starts": [jsonio.enc_rat(s) for s in starts]},
                    )
                stages["four_cycle_r"] = {
                    "start": jsonio.enc_rat(starts[0]),
                    "rotations_agree": True,
                }
            rational = rationalize_components(qinst)
            stages["rationalize"] = {
                "size": len(rational),
                "elements": [jsonio.enc_rat(x) for x in rational],
            }
            ints, scale = integerize(rational)
            stages["integerize"] = {"scale": jsonio.enc_int(scale)}
            B = sorted(set(ints))
            scaled = [t * scale * scale for t in targets]
            if any(x.denominator != 1 for x in scaled):
                raise FalsificationError(
                    "integerized targets are not integral",
                    payload={"scale": str(scale)},
                )
            A = [x.numerator for x in scaled]
        else:
            elements = inst.elements
            if inst.field_tag == "rational":
                fracs = [Fraction(x) for x in elements]
                absed, factor = absolutize(fracs)
                stages["absolutize"] = {"size": len(absed), "shrink_factor_bound": factor}
                ints, scale = integerize(absed)
                stages["integerize"] = {"scale": jsonio.enc_int(scale)}
                B = sorted(set(ints))
                scale_sq = scale * scale
            else:
                absed, factor = absolutize(elements)
                stages["absolutize"] = {"size": len(absed), "shrink_factor_bound": factor}
                B = absed
                scale_sq = 1
            if inst.ap is not None:
                A = [t * scale_sq for t in inst.ap.terms()]
                stages["ap"] = {
                    "source": "claim",
                    "descriptor": jsonio.descriptor_to_json(inst.ap),
                }
            else:
                ps = product_set(B)
                found = longest_ap(list(ps.products), mode="exact")
                desc = found.descriptor()
                if desc is None:
                    raise InputError(
                        f"no progression of length >= 3 found (best length {found.length})"
                    )
                A = desc.terms()
                stages["ap"] = {
                    "source": "search",
                    "descriptor": jsonio.descriptor_to_json(desc),
                }
        _integer_stages(B, A, report, cycle_cap)
    except FalsificationError as exc:
        report["falsifications"].append({"message": str(exc), "payload": exc.payload})
        report["ok"] = False
    return report


def pipeline_report_json(inst: InstanceFile, cycle_cap: int = 200) -> str:
    return jsonio.dumps_canonical(pipeline(inst, cycle_cap))
