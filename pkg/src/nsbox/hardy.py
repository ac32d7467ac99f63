"""Hardy-type paradox arguments over no-signaling boxes.

Two argument kinds are supported, each built from one success condition and
three zero conditions on the four input pairs:

* conventional: success is the single cell (first Alice outcome, last Bob
  outcome) on the designated pair; the zero conditions kill that success
  pattern's deterministic explanations cell by cell;
* relaxed (cumulative): success is the ordering event "Alice's outcome rank
  is below Bob's" on the designated pair; the zero conditions forbid the
  analogous ordering events on the other three pairs, and the last of them
  may be relaxed from "= 0" to "<= p".

The module optimizes success exactly over the no-signaling polytope (LP) or
over local deterministic models (exhaustive enumeration, deliberately
independent of the LP kernel), evaluates a box's success mass PP, and
computes PN, the largest total success mass over families of
success-disjoint outcome-relabeled arguments the box satisfies on the same
designated input pair. PPC = PN - PP.

Relabelings map rank positions (the order the argument's inequalities use)
to concrete outcomes, per physical input; searching them uses the cyclic
shifts and reversals of each outcome range by default, or every permutation
on request.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .boxes import (
    JointBox,
    Scenario,
    is_valid_box,
    polytope_system,
)
from .lp import LinearProgram, LpStatus, solve_max
from .rationals import coerce_rational, format_rational
from .vertices import (
    NonlocalLabel,
    deterministic_box,
    deterministic_strategies,
    nonlocal_entry_fn,
    nonlocal_vertex,
)

__all__ = [
    "KIND_CONVENTIONAL",
    "KIND_RELAXED",
    "REGIME_NS",
    "REGIME_LHV",
    "Relabeling",
    "HardyArgument",
    "ArgumentEvents",
    "ArgumentNotSatisfied",
    "OptimizationReport",
    "PnResult",
    "QuantumReference",
    "build_argument",
    "argument_events",
    "format_event",
    "ns_program",
    "max_success_ns",
    "max_success_lhv",
    "evaluate_pp",
    "compute_pn",
    "ppc",
    "best_satisfied_argument",
    "attaining_nonlocal_vertex",
    "quantum_reference",
]

KIND_CONVENTIONAL = "conventional"
KIND_RELAXED = "relaxed"
REGIME_NS = "no-signaling"
REGIME_LHV = "local-realistic"

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class Relabeling:
    """Per-input outcome permutations plus optional input swaps.

    Outcome permutations are indexed by the physical input and map rank
    positions to concrete outcomes; None means identity. An input swap
    exchanges which physical input plays the argument's first and second
    role for that party, so the designated pair moves with the swap.
    """

    alice_input_swap: bool = False
    bob_input_swap: bool = False
    alice_perms: Optional[tuple[tuple[int, ...], tuple[int, ...]]] = None
    bob_perms: Optional[tuple[tuple[int, ...], tuple[int, ...]]] = None

    def resolved(self, scenario: Scenario):
        """Concrete (alice_perms, bob_perms), validated as bijections."""
        return (
            self._checked(self.alice_perms, scenario.alice, "alice"),
            self._checked(self.bob_perms, scenario.bob, "bob"),
        )

    @staticmethod
    def _checked(perms, counts, who: str):
        if perms is None:
            return tuple(tuple(range(n)) for n in counts)
        perms = tuple(tuple(p) for p in perms)
        if len(perms) != 2:
            raise ValueError(f"{who} needs one outcome permutation per input, got {perms!r}")
        for x, (perm, n) in enumerate(zip(perms, counts)):
            if sorted(perm) != list(range(n)):
                raise ValueError(
                    f"{who} permutation for input {x} is not a bijection on 0..{n - 1}: {perm!r}")
        return perms


@dataclass(frozen=True)
class HardyArgument:
    """A paradox argument: kind, scenario, relabeling, and the bound p on the
    last condition (always 0 for the conventional kind)."""

    kind: str
    scenario: Scenario
    relabeling: Relabeling = Relabeling()
    last_condition_bound: Fraction = _ZERO


@dataclass(frozen=True)
class ArgumentEvents:
    """Concrete event sets of an argument: one success set and three zero
    sets, each a frozenset of (x, y, a, b) coordinates (0-based outcomes).
    When the argument carries a bound p > 0, zeros[2] is the bounded set."""

    success: frozenset
    zeros: tuple[frozenset, frozenset, frozenset]


class ArgumentNotSatisfied(Exception):
    """A box fails one of an argument's zero (or bounded) conditions.

    Attributes: condition (0-based index into zeros), event (the violating
    coordinate, None for a bounded-sum failure), amount (the offending mass).
    """

    def __init__(self, message: str, condition=None, event=None, amount=None):
        super().__init__(message)
        self.condition = condition
        self.event = event
        self.amount = amount


@dataclass(frozen=True)
class OptimizationReport:
    argument: HardyArgument
    optimum: Fraction
    witness: JointBox
    regime: str


@dataclass(frozen=True)
class PnResult:
    pn: Fraction
    family: tuple[HardyArgument, ...]


def format_event(event) -> str:
    x, y, a, b = event
    return f"(x={x}, y={y}, a={a + 1}, b={b + 1})"


def build_argument(kind: str, scenario: Scenario, p=_ZERO,
                   relabeling: Optional[Relabeling] = None) -> tuple[HardyArgument, ArgumentEvents]:
    """A validated argument together with its concrete event sets."""
    if kind not in (KIND_CONVENTIONAL, KIND_RELAXED):
        raise ValueError(f"kind must be '{KIND_CONVENTIONAL}' or '{KIND_RELAXED}', got {kind!r}")
    p = coerce_rational(p)
    if p < 0 or p >= 1:
        raise ValueError(f"last-condition bound must satisfy 0 <= p < 1, got {p}")
    if kind == KIND_CONVENTIONAL and p != 0:
        raise ValueError("the conventional argument has no bounded condition; p must be 0")
    arg = HardyArgument(kind, scenario, relabeling if relabeling is not None else Relabeling(), p)
    return arg, argument_events(arg)


def argument_events(arg: HardyArgument) -> ArgumentEvents:
    """Event sets of the argument with its relabeling already applied.

    Logical input i of a party is measured at physical input (i, swapped if
    the relabeling says so); ranks r, t are turned into concrete outcomes by
    that physical input's permutation.
    """
    s = arg.scenario
    aperms, bperms = arg.relabeling.resolved(s)
    ax = (1, 0) if arg.relabeling.alice_input_swap else (0, 1)
    by = (1, 0) if arg.relabeling.bob_input_swap else (0, 1)

    def ev(i, j, r, t):
        x, y = ax[i], by[j]
        return (x, y, aperms[x][r], bperms[y][t])

    def counts(i, j):
        return s.alice[ax[i]], s.bob[by[j]]

    if arg.kind == KIND_RELAXED:
        def ordering(i, j, flip):
            na, nb = counts(i, j)
            return frozenset(
                ev(i, j, r, t)
                for r in range(na) for t in range(nb)
                if (t < r if flip else r < t))

        success = ordering(0, 0, False)
        zeros = (ordering(1, 0, False), ordering(1, 1, True), ordering(0, 1, False))
    else:
        last0 = counts(0, 0)[1] - 1
        last1 = counts(0, 1)[1] - 1
        success = frozenset({ev(0, 0, 0, last0)})
        zeros = (
            frozenset(ev(1, 0, r, last0) for r in range(1, counts(1, 0)[0])),
            frozenset(ev(0, 1, 0, t) for t in range(last1)),
            frozenset({ev(1, 1, 0, last1)}),
        )
    return ArgumentEvents(success, zeros)


def _check_box_for(box: JointBox, arg: HardyArgument) -> None:
    if box.scenario != arg.scenario:
        raise ValueError("box and argument live on different scenarios")
    report = is_valid_box(box)
    if not report:
        raise ValueError("invalid box: " + "; ".join(report.violations[:3]))


def evaluate_pp(box: JointBox, arg: HardyArgument) -> Fraction:
    """The box's success mass under arg, provided every zero condition holds
    exactly (and the bounded one is within its bound); otherwise raises
    ArgumentNotSatisfied naming the first violation."""
    _check_box_for(box, arg)
    events = argument_events(arg)
    p = arg.last_condition_bound
    for k, zset in enumerate(events.zeros):
        if p > 0 and k == 2:
            total = sum((box.prob(*e) for e in sorted(zset)), _ZERO)
            if total > p:
                raise ArgumentNotSatisfied(
                    f"bounded condition exceeds its bound: mass {format_rational(total)}"
                    f" > {format_rational(p)}",
                    condition=k, amount=total)
        else:
            for e in sorted(zset):
                q = box.prob(*e)
                if q != 0:
                    raise ArgumentNotSatisfied(
                        f"zero condition {k + 1} violated at event {format_event(e)}"
                        f" with probability {format_rational(q)}",
                        condition=k, event=e, amount=q)
    return sum((box.prob(*e) for e in sorted(events.success)), _ZERO)


def ns_program(arg: HardyArgument) -> LinearProgram:
    """The exact LP: maximize the argument's success mass over the
    no-signaling polytope intersected with its zero/bounded conditions.
    Positivity enters through the kernel's x >= 0 ground rule."""
    s = arg.scenario
    events = argument_events(arg)
    n = s.num_coords
    objective = [_ZERO] * n
    for e in events.success:
        objective[s.coord_index(*e)] = _ONE
    eq = polytope_system(s).eq_rows()
    ineq = []
    p = arg.last_condition_bound
    for k, zset in enumerate(events.zeros):
        row = [_ZERO] * n
        for e in zset:
            row[s.coord_index(*e)] = _ONE
        if p > 0 and k == 2:
            ineq.append((row, p))
        else:
            eq.append((row, _ZERO))
    return LinearProgram(n, objective, eq, ineq, nonneg=True)


def max_success_ns(arg: HardyArgument) -> OptimizationReport:
    """Exact optimum of the argument over the no-signaling polytope, with a
    vertex witness that is revalidated before being returned."""
    result = solve_max(ns_program(arg))
    if result.status is not LpStatus.OPTIMAL:
        raise RuntimeError(
            f"internal error: the no-signaling program reported {result.status.value}; "
            "it is feasible and bounded by construction")
    witness = JointBox(arg.scenario, result.solution)
    report = is_valid_box(witness)
    if not report:
        raise RuntimeError(
            "internal error: LP witness failed validity: " + "; ".join(report.violations[:3]))
    return OptimizationReport(arg, result.value, witness, REGIME_NS)


def _group_by_block(events: Iterable) -> dict:
    grouped: dict[tuple[int, int], set] = {}
    for (x, y, a, b) in events:
        grouped.setdefault((x, y), set()).add((a, b))
    return grouped


def max_success_lhv(arg: HardyArgument) -> OptimizationReport:
    """Exact optimum over local deterministic strategies (and hence over all
    their mixtures: the objective is linear and the zero conditions force
    every strategy in a satisfying mixture to satisfy them individually).

    This is a plain exhaustive enumeration, kept deliberately independent of
    the LP kernel so the two optimization routes can cross-check each other.
    """
    if arg.last_condition_bound != 0:
        raise ValueError("the local-realistic route only handles p = 0 arguments")
    events = argument_events(arg)
    zero_blocks = [_group_by_block(zset) for zset in events.zeros]
    success_blocks = _group_by_block(events.success)
    best_val = -1
    best_strategy = None
    for alice_fn, bob_fn in deterministic_strategies(arg.scenario):
        ok = True
        for grouped in zero_blocks:
            for (x, y), cells in grouped.items():
                if (alice_fn[x], bob_fn[y]) in cells:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        val = sum(1 for (x, y), cells in success_blocks.items()
                  if (alice_fn[x], bob_fn[y]) in cells)
        if val > best_val:
            best_val, best_strategy = val, (alice_fn, bob_fn)
    if best_strategy is None:
        raise RuntimeError("internal error: no deterministic strategy satisfies the zero conditions")
    witness = deterministic_box(arg.scenario, *best_strategy)
    return OptimizationReport(arg, Fraction(best_val), witness, REGIME_LHV)


def _dihedral_perms(n: int) -> tuple[tuple[int, ...], ...]:
    """Cyclic shifts then reversed shifts of (0..n-1), deduplicated, stable order."""
    seen: set[tuple[int, ...]] = set()
    out: list[tuple[int, ...]] = []
    for k in range(n):
        p = tuple((r + k) % n for r in range(n))
        if p not in seen:
            seen.add(p)
            out.append(p)
    for k in range(n):
        p = tuple((k - r) % n for r in range(n))
        if p not in seen:
            seen.add(p)
            out.append(p)
    return tuple(out)


def _perm_family(n: int, exhaustive: bool) -> tuple[tuple[int, ...], ...]:
    if exhaustive:
        return tuple(itertools.permutations(range(n)))
    return _dihedral_perms(n)


def _rank_templates(kind: str, na0: int, na1: int, nb0: int, nb1: int):
    """Success and zero templates in rank space, keyed by the permutation pair
    they couple: (a1, b0), (a1, b1), (a0, b1), plus the success (a0, b0).
    The bounded template (when p > 0, relaxed kind) is the (a0, b1) one."""
    if kind == KIND_RELAXED:
        t_a1b0 = tuple((r, t) for r in range(na1) for t in range(nb0) if r < t)
        t_a1b1 = tuple((r, t) for r in range(na1) for t in range(nb1) if t < r)
        t_a0b1 = tuple((r, t) for r in range(na0) for t in range(nb1) if r < t)
        t_success = tuple((r, t) for r in range(na0) for t in range(nb0) if r < t)
    else:
        t_a1b0 = tuple((r, nb0 - 1) for r in range(1, na1))
        t_a1b1 = ((0, nb1 - 1),)
        t_a0b1 = tuple((0, t) for t in range(nb1 - 1))
        t_success = ((0, nb0 - 1),)
    return t_a1b0, t_a1b1, t_a0b1, t_success


def _satisfied_chains(box: JointBox, kind: str, p: Fraction, swaps: tuple[bool, bool],
                      exhaustive: bool):
    """All permutation chains whose relabeled argument the box satisfies.

    Returns (family maps, designated block, success template, achievable),
    where achievable maps (index of a0 perm, index of b0 perm) to a witness
    (index of a1 perm, index of b1 perm), deterministically chosen.
    """
    s = box.scenario
    swap_a, swap_b = swaps
    xs, x1 = (1, 0) if swap_a else (0, 1)
    ys, y1 = (1, 0) if swap_b else (0, 1)
    na0, na1 = s.alice[xs], s.alice[x1]
    nb0, nb1 = s.bob[ys], s.bob[y1]
    t_a1b0, t_a1b1, t_a0b1, t_success = _rank_templates(kind, na0, na1, nb0, nb1)

    fam_a0 = _perm_family(na0, exhaustive)
    fam_a1 = _perm_family(na1, exhaustive)
    fam_b0 = _perm_family(nb0, exhaustive)
    fam_b1 = _perm_family(nb1, exhaustive)

    def relation(block, template, fam_left, fam_right, bound):
        x, y = block
        rel: dict[int, list[int]] = {}
        for ia, pa in enumerate(fam_left):
            hits = []
            for ib, pb in enumerate(fam_right):
                if bound > 0:
                    total = sum((box.prob(x, y, pa[r], pb[t]) for r, t in template), _ZERO)
                    ok = total <= bound
                else:
                    ok = all(box.prob(x, y, pa[r], pb[t]) == 0 for r, t in template)
                if ok:
                    hits.append(ib)
            if hits:
                rel[ia] = hits
        return rel

    r_a1b0 = relation((x1, ys), t_a1b0, fam_a1, fam_b0, _ZERO)
    r_a1b1 = relation((x1, y1), t_a1b1, fam_a1, fam_b1, _ZERO)
    r_a0b1 = relation((xs, y1), t_a0b1, fam_a0, fam_b1, p)

    b1_to_a0: dict[int, list[int]] = {}
    for ia0 in sorted(r_a0b1):
        for ib1 in r_a0b1[ia0]:
            b1_to_a0.setdefault(ib1, []).append(ia0)

    pair_witness: dict[tuple[int, int], int] = {}
    for ia1 in sorted(set(r_a1b0) & set(r_a1b1)):
        for ib0 in r_a1b0[ia1]:
            for ib1 in r_a1b1[ia1]:
                pair_witness.setdefault((ib0, ib1), ia1)

    achievable: dict[tuple[int, int], tuple[int, int]] = {}
    for (ib0, ib1), ia1 in sorted(pair_witness.items()):
        for ia0 in b1_to_a0.get(ib1, ()):
            achievable.setdefault((ia0, ib0), (ia1, ib1))

    families = (fam_a0, fam_a1, fam_b0, fam_b1)
    placement = (xs, x1, ys, y1)
    return families, placement, t_success, achievable


def _success_candidates(box: JointBox, kind: str, p: Fraction, swaps: tuple[bool, bool],
                        exhaustive: bool):
    """Deterministic list of (success cells, mass, relabeling) for every
    satisfied permutation chain; cells live on the designated block."""
    families, placement, t_success, achievable = _satisfied_chains(box, kind, p, swaps, exhaustive)
    fam_a0, fam_a1, fam_b0, fam_b1 = families
    xs, x1, ys, y1 = placement
    out = []
    for (ia0, ib0) in sorted(achievable):
        ia1, ib1 = achievable[(ia0, ib0)]
        pa0, pa1 = fam_a0[ia0], fam_a1[ia1]
        pb0, pb1 = fam_b0[ib0], fam_b1[ib1]
        cells = frozenset((pa0[r], pb0[t]) for r, t in t_success)
        mass = sum((box.prob(xs, ys, a, b) for a, b in sorted(cells)), _ZERO)
        alice_perms = [None, None]
        bob_perms = [None, None]
        alice_perms[xs], alice_perms[x1] = pa0, pa1
        bob_perms[ys], bob_perms[y1] = pb0, pb1
        rel = Relabeling(swaps[0], swaps[1], tuple(alice_perms), tuple(bob_perms))
        out.append((cells, mass, rel))
    return out, (xs, ys)


def _max_disjoint_mass(entries):
    """Exact maximum-weight packing of pairwise-disjoint cell sets.

    Depth-first search over entries sorted by descending mass, pruned by a
    suffix-sum bound; ties keep the first optimum found, so the result is
    deterministic.
    """
    order = sorted(range(len(entries)),
                   key=lambda i: (-entries[i][1], sorted(entries[i][0])))
    cells = [entries[i][0] for i in order]
    masses = [entries[i][1] for i in order]
    suffix = [_ZERO] * (len(order) + 1)
    for i in range(len(order) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + masses[i]

    best_total = _ZERO
    best_pick: tuple[int, ...] = ()
    picked: list[int] = []

    def search(i, used, total):
        nonlocal best_total, best_pick
        if total > best_total:
            best_total, best_pick = total, tuple(picked)
        if i == len(order) or total + suffix[i] <= best_total:
            return
        if used.isdisjoint(cells[i]):
            picked.append(i)
            search(i + 1, used | cells[i], total + masses[i])
            picked.pop()
        search(i + 1, used, total)

    search(0, frozenset(), _ZERO)
    return best_total, [entries[order[i]] for i in best_pick]


def compute_pn(box: JointBox, base: HardyArgument, exhaustive_perms: bool = False) -> PnResult:
    """PN: the largest total success mass over families of success-disjoint
    relabeled arguments of base's kind, all satisfied by the box on base's
    designated input pair. The base itself competes, so PN >= PP.

    The relabeling search runs over cyclic shifts and reversals per input by
    default; exhaustive_perms widens it to every outcome permutation.
    """
    base_pp = evaluate_pp(box, base)
    swaps = (base.relabeling.alice_input_swap, base.relabeling.bob_input_swap)
    candidates, _block = _success_candidates(
        box, base.kind, base.last_condition_bound, swaps, exhaustive_perms)

    base_events = argument_events(base)
    base_cells = frozenset((a, b) for (_x, _y, a, b) in base_events.success)
    entries = [(base_cells, base_pp, base)]
    seen = {base_cells}
    for cells, mass, rel in candidates:
        if cells in seen:
            continue
        seen.add(cells)
        arg = HardyArgument(base.kind, box.scenario, rel, base.last_condition_bound)
        entries.append((cells, mass, arg))

    positive = [e for e in entries if e[1] > 0]
    if not positive:
        return PnResult(_ZERO, (base,))
    total, picked = _max_disjoint_mass(positive)

    family = []
    claimed: set = set()
    for cells, mass, payload in picked:
        arg = payload if isinstance(payload, HardyArgument) else payload
        check = evaluate_pp(box, arg)
        if check != mass or not claimed.isdisjoint(cells):
            raise RuntimeError("internal error: inconsistent packing member")
        claimed.update(cells)
        family.append(arg)
    return PnResult(total, tuple(family))


def ppc(box: JointBox, base: HardyArgument, exhaustive_perms: bool = False) -> Fraction:
    """Nonlocality not converted into success: PN minus PP for the base."""
    return compute_pn(box, base, exhaustive_perms).pn - evaluate_pp(box, base)


def best_satisfied_argument(box: JointBox, kind: str, p=_ZERO,
                            exhaustive_perms: bool = False):
    """The outcome-relabeled argument of the given kind (identity input roles)
    with the largest success mass among those the box satisfies, or None.
    Ties keep the first candidate in the deterministic search order."""
    arg, _ = build_argument(kind, box.scenario, p)  # validates kind and p
    _check_box_for(box, arg)
    candidates, _block = _success_candidates(
        box, kind, arg.last_condition_bound, (False, False), exhaustive_perms)
    best = None
    for cells, mass, rel in candidates:
        if best is None or mass > best[1]:
            best = (rel, mass)
    if best is None:
        return None
    rel, mass = best
    return HardyArgument(kind, box.scenario, rel, arg.last_condition_bound), mass


def attaining_nonlocal_vertex(arg: HardyArgument) -> tuple[NonlocalLabel, JointBox, Fraction]:
    """Scan every congruence-box label for those satisfying arg's zero
    conditions and return the one with maximal success mass (ties: first
    label in lexicographic order). The winner's success mass is recomputed
    from its materialized table via evaluate_pp before being returned."""
    s = arg.scenario
    events = argument_events(arg)
    d = s.min_outputs
    p = arg.last_condition_bound
    zero_lists = [sorted(zset) for zset in events.zeros]
    success_list = sorted(events.success)
    best = None
    for label in itertools.product(range(d), repeat=3):
        entry = nonlocal_entry_fn(s, label)
        ok = True
        for k, zlist in enumerate(zero_lists):
            if p > 0 and k == 2:
                if sum((entry(*e) for e in zlist), _ZERO) > p:
                    ok = False
                    break
            elif any(entry(*e) != 0 for e in zlist):
                ok = False
                break
        if not ok:
            continue
        mass = sum((entry(*e) for e in success_list), _ZERO)
        if best is None or mass > best[1]:
            best = (label, mass)
    if best is None:
        raise ValueError("no congruence vertex satisfies the argument's zero conditions")
    label, mass = best
    box = nonlocal_vertex(s, label)
    pp = evaluate_pp(box, arg)
    if pp != mass:
        raise RuntimeError("internal error: scan and table evaluation disagree")
    return NonlocalLabel(*label), box, pp


@dataclass(frozen=True)
class QuantumReference:
    """A documented reference value; nothing quantum is ever computed here."""

    value: float
    note: str


_TWO_OUTCOME_QUANTUM = (5.0 * math.sqrt(5.0) - 11.0) / 2.0


def quantum_reference(kind: str, min_outputs: int) -> Optional[QuantumReference]:
    """Known quantum optimum for comparison plots, where one exists.

    The conventional argument's quantum optimum is (5*sqrt(5) - 11)/2, about
    0.09017, an irrational number that is the same for every outcome count;
    it is carried as a documented decimal, never computed. The two-outcome
    relaxed argument coincides with the conventional one; beyond two outcomes
    no closed form is carried.
    """
    if kind == KIND_CONVENTIONAL:
        return QuantumReference(
            _TWO_OUTCOME_QUANTUM,
            "(5*sqrt(5)-11)/2, irrational; independent of the outcome count; reference only")
    if kind == KIND_RELAXED and min_outputs == 2:
        return QuantumReference(
            _TWO_OUTCOME_QUANTUM,
            "two-outcome case coincides with the conventional argument; reference only")
    return None
