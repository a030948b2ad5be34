"""Rotation-extension conversion of 2-factors into Hamilton cycles.

Each 2-factor is broken into a long path plus leftover cycles; unrestricted
two-sided Posa rotations over the reservoir (all host edges not committed to
a finished cycle or a pending factor) either extend the path into another
cycle or close it.  Every mutation is recorded in a transcript that replays
bit-exactly, and a ledger tracks per-step reservoir consumption against the
rotation budgets when those are defined.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from .graph import BrokenTwoFactor, Graph, cycle_cover_edges, norm_edge
from .sampler import Params


@dataclass
class TranscriptRecord:
    step: int
    kind: str  # break | rotate | absorb | close
    pivot: int | None = None
    deleted: tuple[int, int] | None = None
    added: tuple[int, int] | None = None

    def to_json_obj(self) -> dict:
        return {
            "step": self.step,
            "kind": self.kind,
            "pivot": self.pivot,
            "deleted": list(self.deleted) if self.deleted else None,
            "added": list(self.added) if self.added else None,
        }


class GammaView:
    """Reservoir adjacency: host edges not in the committed set."""

    def __init__(self, host: Graph, committed: set[tuple[int, int]]):
        self.host = host
        self.committed = committed
        self._adj: list[list[int] | None] = [None] * host.n

    def adj(self, v: int) -> list[int]:
        cached = self._adj[v]
        if cached is None:
            cached = sorted(
                u for u in self.host.adj(v) if norm_edge(u, v) not in self.committed
            )
            self._adj[v] = cached
        return cached

    def has(self, u: int, v: int) -> bool:
        e = norm_edge(u, v)
        return e in self.host.edges and e not in self.committed

    def edge_set(self) -> set[tuple[int, int]]:
        return self.host.edges - self.committed


# -- elementary moves ---------------------------------------------------------


def break_to_path(cycles: list[list[int]], n: int) -> tuple[BrokenTwoFactor, TranscriptRecord]:
    """Remove the lexicographically smallest edge of the cycle holding the
    smallest vertex; the opened cycle becomes the long path."""
    smallest = min(min(c) for c in cycles)
    ci = next(i for i, c in enumerate(cycles) if smallest in c)
    cyc = cycles[ci]
    k = len(cyc)
    removed = min(norm_edge(cyc[i], cyc[(i + 1) % k]) for i in range(k))
    idx = next(
        i for i in range(k) if norm_edge(cyc[i], cyc[(i + 1) % k]) == removed
    )
    path = cyc[idx + 1 :] + cyc[: idx + 1]
    if path[0] > path[-1]:
        path = path[::-1]
    rest = [list(c) for j, c in enumerate(cycles) if j != ci]
    broken = BrokenTwoFactor(n=n, cycles=rest, path=list(path))
    return broken, TranscriptRecord(step=0, kind="break", deleted=removed)


def rotate(path: list[int], pivot: int) -> tuple[list[int], tuple[int, int], tuple[int, int]]:
    """Rotation about the tail endpoint with the given pivot.

    Returns (new_path, deleted_edge, added_edge); the head endpoint is fixed.
    """
    tail = path[-1]
    i = path.index(pivot)
    if i == len(path) - 1:
        raise ValueError("pivot cannot be the moving endpoint")
    if i == len(path) - 2:
        raise ValueError("pivot adjacent to moving endpoint: no-op rotation")
    if i == 0:
        raise ValueError("pivot is the fixed endpoint: closable configuration, not a rotation")
    new_path = path[: i + 1] + path[: i : -1]
    return new_path, norm_edge(pivot, path[i + 1]), norm_edge(pivot, tail)


def absorb_cycle(
    broken: BrokenTwoFactor, entry: int
) -> tuple[tuple[int, int], tuple[int, int]]:
    """Splice the cycle containing `entry` onto the path's tail endpoint.

    Deletes the entry-to-successor edge under the cycle's stored orientation.
    Returns (added_edge, deleted_edge).
    """
    tail = broken.path[-1]
    ci = broken.cycle_index_of(entry)
    if ci is None:
        raise ValueError(f"entry vertex {entry} is not on a cycle")
    cyc = broken.cycles.pop(ci)
    k = len(cyc)
    i = cyc.index(entry)
    succ = cyc[(i + 1) % k]
    segment = [cyc[(i - t) % k] for t in range(k)]  # entry, pred, ..., succ
    broken.path = broken.path + segment
    return norm_edge(tail, entry), norm_edge(entry, succ)


# -- Posa search --------------------------------------------------------------


@dataclass
class Outcome:
    kind: str  # extend | close | exhausted
    path: list[int] | None = None  # realized path (tail = acting endpoint)
    rotations: list[tuple[int, tuple[int, int], tuple[int, int]]] = field(default_factory=list)
    entry: int | None = None  # extend: off-path vertex adjacent to tail
    closing_edge: tuple[int, int] | None = None


def _grow_side(
    path: list[int],
    gamma: GammaView,
    offpath: set[int],
    close_target: int | None,
    max_states: int,
    max_levels: int,
) -> tuple[Outcome | None, Outcome | None, list[tuple[list[int], list]]]:
    """BFS over rotations of the tail with the head fixed.

    Returns (extend_outcome, close_outcome, realized_states); the first
    Extend aborts the search, the first Close is remembered.
    """
    head = path[0]
    visited = {path[-1]}
    frontier: list[tuple[list[int], list]] = [(path, [])]
    states = list(frontier)
    close_found: Outcome | None = None

    def check(p: list[int], rots: list) -> tuple[Outcome | None, Outcome | None]:
        tail = p[-1]
        ext = close = None
        if offpath:
            cand = [u for u in gamma.adj(tail) if u in offpath]
            if cand:
                ext = Outcome(kind="extend", path=p, rotations=rots, entry=min(cand))
        if close_target is not None and gamma.has(tail, head) and len(p) >= 3:
            close = Outcome(
                kind="close", path=p, rotations=rots, closing_edge=norm_edge(tail, head)
            )
        return ext, close

    ext, close = check(path, [])
    if ext:
        return ext, None, states
    if close and close_found is None:
        close_found = close

    level = 0
    while frontier and level < max_levels and len(states) < max_states:
        level += 1
        nxt: list[tuple[list[int], list]] = []
        for p, rots in frontier:
            tail = p[-1]
            pos = {v: i for i, v in enumerate(p)}
            last = len(p) - 1
            for pivot in gamma.adj(tail):
                i = pos.get(pivot)
                if i is None or i == 0 or i >= last - 1:
                    continue
                new_tail = p[i + 1]
                if new_tail in visited:
                    continue
                visited.add(new_tail)
                new_path = p[: i + 1] + p[: i : -1]
                new_rots = rots + [(pivot, norm_edge(pivot, p[i + 1]), norm_edge(pivot, tail))]
                ext, close = check(new_path, new_rots)
                if ext:
                    return ext, close_found, states
                if close and close_found is None:
                    close_found = close
                entry = (new_path, new_rots)
                nxt.append(entry)
                states.append(entry)
                if len(states) >= max_states:
                    break
            if len(states) >= max_states:
                break
        frontier = nxt
    return None, close_found, states


def posa_search(
    broken: BrokenTwoFactor,
    gamma: GammaView,
    max_states: int = 2000,
    max_levels: int = 64,
    two_sided_cap: int = 40,
) -> Outcome:
    """Find an Extend or Close outcome by two-sided rotation BFS.

    For a path with leftover cycles, Extend is preferred and Close (with a
    later reopen) is the fallback; for a spanning path only Close applies.
    Exhausted means both sides saturated with neither outcome.
    """
    offpath = broken.offpath_vertices()
    spanning = not offpath
    close_target = broken.path[0]

    ext, close, states_a = _grow_side(
        broken.path, gamma, offpath, close_target, max_states, max_levels
    )
    if ext:
        return ext
    if close and spanning:
        return close
    first_close = close

    rev = broken.path[::-1]
    ext, close_b, states_b = _grow_side(
        rev, gamma, offpath, rev[0], max_states, max_levels
    )
    if ext:
        return ext
    if close_b and spanning:
        return close_b
    if first_close is None:
        first_close = close_b

    if spanning:
        # two-sided: re-anchor at each reachable endpoint and rotate the
        # opposite end of the realized path
        for p, rots in states_a[:two_sided_cap]:
            anchor = p[-1]
            rp = p[::-1]
            ext2, close2, _ = _grow_side(
                rp, gamma, offpath, anchor, max_states, max_levels
            )
            if close2 is not None:
                close2.rotations = rots + close2.rotations
                return close2
    if first_close is not None:
        return first_close
    return Outcome(kind="exhausted")


def expansion_probe(
    path: list[int], gamma: GammaView, max_levels: int = 16, params: Params | None = None
) -> dict:
    """Measure per-level endpoint-set growth (true rotation reachability)
    against the halving inequality |S_{t+1}| >= |B(S_t)|/2 - |S_t| and the
    initial-rotation milestone."""
    if len(path) < 3:
        return {"trivial": True, "levels": []}
    on_path = set(path)
    extend_available = False
    levels = []
    s_t = {path[-1]}
    frontier: list[list[int]] = [list(path)]
    for _ in range(max_levels):
        bnd = set()
        for v in s_t:
            for u in gamma.adj(v):
                if u in on_path:
                    bnd.add(u)
                else:
                    extend_available = True
        bnd -= s_t
        nxt: list[list[int]] = []
        new_endpoints = 0
        for p in frontier:
            tail = p[-1]
            pos = {v: i for i, v in enumerate(p)}
            last = len(p) - 1
            for pivot in gamma.adj(tail):
                i = pos.get(pivot)
                if i is None or i == 0 or i >= last - 1:
                    continue
                cand = p[i + 1]
                if cand in s_t:
                    continue
                s_t.add(cand)
                new_endpoints += 1
                nxt.append(p[: i + 1] + p[: i : -1])
        lower = len(bnd) / 2 - (len(s_t) - new_endpoints)
        levels.append(
            {"s": len(s_t) - new_endpoints, "boundary": len(bnd),
             "lower_bound_next": lower, "s_next": len(s_t),
             "inequality_holds": len(s_t) >= lower}
        )
        if not nxt:
            break
        frontier = nxt
    report: dict = {"trivial": False, "levels": levels, "extend_available": extend_available}
    if params is not None and params.e0 is not None:
        report["milestone_eta_n_200"] = params.eta * params.n / 200.0
        report["reached_milestone"] = levels[-1]["s"] >= report["milestone_eta_n_200"]
    return report


# -- full conversion ----------------------------------------------------------


@dataclass
class StepRecord:
    step: int
    factor: int
    rotations: int
    consumed: list[tuple[int, int]]
    returned: list[tuple[int, int]]
    cap: float | None
    within_cap: bool | None


@dataclass
class ConversionResult:
    hamilton_cycles: list[list[int]]
    per_factor: list[dict]
    ledger: list[StepRecord]
    transcripts: dict[int, list[TranscriptRecord]]
    steps: int
    total_rotations: int
    g2_consumed: int
    mode: str
    audit_failures: list[str]
    wall_seconds: float


def convert_all(
    factors: list[list[list[int]]],
    g0: Graph,
    g2: Graph,
    params: Params,
    mode: str = "report",
    audit: bool = False,
    max_states: int = 2000,
    max_levels: int = 64,
) -> ConversionResult:
    t0 = time.perf_counter()
    if mode not in ("report", "enforce"):
        raise ValueError(f"unknown mode {mode!r}")
    n = g0.n
    factor_edges = [set() for _ in factors]
    for i, f in enumerate(factors):
        factor_edges[i] = cycle_cover_edges(f)

    finished_edges: set[tuple[int, int]] = set()
    hamilton: list[list[int]] = []
    per_factor: list[dict] = []
    ledger: list[StepRecord] = []
    transcripts: dict[int, list[TranscriptRecord]] = {}
    audit_failures: list[str] = []
    pending: set[int] = set(range(len(factors)))
    step = 0
    total_rot = 0

    cap = None
    if params.budgets_defined:
        cap = 2 * params.e0 + 2 * params.e1 + 2
    enforce_levels = max_levels
    if mode == "enforce" and params.budgets_defined:
        enforce_levels = max(1, int(2 * params.e0 + 2 * params.e1))

    def committed_edges(current: set[tuple[int, int]]) -> set[tuple[int, int]]:
        out = set(finished_edges)
        out |= current
        for i in pending:
            out |= factor_edges[i]
        return out

    def run_audit(current: set[tuple[int, int]], gamma_edges: set[tuple[int, int]]) -> None:
        parts = [finished_edges, current, gamma_edges]
        fut = set()
        for i in pending:
            fut |= factor_edges[i]
        parts.append(fut)
        union = set().union(*parts)
        if union != g0.edges or sum(len(p) for p in parts) != len(g0.edges):
            audit_failures.append(f"edge conservation broken at step {step}")

    def attempt(fi: int, pass_no: int) -> bool:
        nonlocal step, total_rot
        pending.discard(fi)
        broken, brec = break_to_path([list(c) for c in factors[fi]], n)
        transcript = [brec]
        transcripts[fi] = transcript
        fstar = broken.edges()
        steps_here = rot_here = 0
        while True:
            step += 1
            steps_here += 1
            gamma = GammaView(g0, committed_edges(fstar))
            gamma_before = gamma.edge_set() if audit else None
            outcome = posa_search(
                broken, gamma, max_states=max_states, max_levels=enforce_levels
            )
            if outcome.kind == "exhausted":
                per_factor.append(
                    {"factor": fi, "outcome": "abandoned", "steps": steps_here,
                     "rotations": rot_here, "pass": pass_no}
                )
                return False
            consumed: list[tuple[int, int]] = []
            returned: list[tuple[int, int]] = []
            # realize the rotation sequence
            broken.path = outcome.path
            for pivot, deleted, added in outcome.rotations:
                transcript.append(
                    TranscriptRecord(step=step, kind="rotate", pivot=pivot,
                                     deleted=deleted, added=added)
                )
                fstar.discard(deleted)
                fstar.add(added)
                returned.append(deleted)
                consumed.append(added)
            nrot = len(outcome.rotations)
            rot_here += nrot
            total_rot += nrot
            done = False
            if outcome.kind == "extend":
                added, deleted = absorb_cycle(broken, outcome.entry)
                transcript.append(
                    TranscriptRecord(step=step, kind="absorb", pivot=None,
                                     deleted=deleted, added=added)
                )
                fstar.add(added)
                fstar.discard(deleted)
                consumed.append(added)
                returned.append(deleted)
            else:  # close
                ce = outcome.closing_edge
                if not broken.cycles:
                    cycle = list(broken.path)
                    if not g0.verify_hamilton_cycle(cycle):
                        raise AssertionError("produced cycle failed verification")
                    transcript.append(
                        TranscriptRecord(step=step, kind="close", added=ce)
                    )
                    fstar.add(ce)
                    consumed.append(ce)
                    finished_edges.update(fstar)
                    hamilton.append(cycle)
                    per_factor.append(
                        {"factor": fi, "outcome": "hamilton", "steps": steps_here,
                         "rotations": rot_here, "pass": pass_no}
                    )
                    done = True
                else:
                    # close to C*, search an escape edge, reopen, absorb
                    cstar = list(broken.path)
                    offpath = broken.offpath_vertices()
                    escape = None
                    for y in cstar:
                        for z in gamma.adj(y):
                            if z in offpath:
                                escape = (y, z)
                                break
                        if escape:
                            break
                    if escape is None:
                        per_factor.append(
                            {"factor": fi, "outcome": "abandoned", "steps": steps_here,
                             "rotations": rot_here, "pass": pass_no, "deadend": True}
                        )
                        return False
                    y, z = escape
                    k = len(cstar)
                    yi = cstar.index(y)
                    reopened = norm_edge(y, cstar[(yi + 1) % k])
                    transcript.append(
                        TranscriptRecord(step=step, kind="close", added=ce, deleted=reopened)
                    )
                    fstar.add(ce)
                    consumed.append(ce)
                    fstar.discard(reopened)
                    returned.append(reopened)
                    broken.path = cstar[yi + 1 :] + cstar[: yi + 1]
                    added, deleted = absorb_cycle(broken, z)
                    transcript.append(
                        TranscriptRecord(step=step, kind="absorb", deleted=deleted, added=added)
                    )
                    fstar.add(added)
                    fstar.discard(deleted)
                    consumed.append(added)
                    returned.append(deleted)
            consumed_net = [e for e in consumed if e not in returned]
            returned_net = [e for e in returned if e not in consumed]
            within = None
            if cap is not None:
                within = len(consumed_net) <= cap
            ledger.append(
                StepRecord(step=step, factor=fi, rotations=nrot,
                           consumed=consumed_net, returned=returned_net,
                           cap=cap, within_cap=within)
            )
            if audit:
                gamma_after = g0.edges - committed_edges(fstar if not done else set())
                if gamma_before is not None:
                    lost = gamma_before - gamma_after
                    if lost != set(consumed_net):
                        audit_failures.append(
                            f"step {step}: untraceable reservoir consumption {lost ^ set(consumed_net)}"
                        )
                run_audit(fstar if not done else set(), gamma_after)
            if done:
                return True

    abandoned: list[int] = []
    for fi in range(len(factors)):
        if not attempt(fi, pass_no=1):
            abandoned.append(fi)
    retry = []
    for fi in abandoned:
        # retry only if the original factor's edges are all free again
        free = g0.edges - committed_edges(set())
        if factor_edges[fi] <= free:
            retry.append(fi)
    for fi in retry:
        attempt(fi, pass_no=2)

    g2_consumed = len(g2.edges & finished_edges)
    return ConversionResult(
        hamilton_cycles=hamilton,
        per_factor=per_factor,
        ledger=ledger,
        transcripts=transcripts,
        steps=step,
        total_rotations=total_rot,
        g2_consumed=g2_consumed,
        mode=mode,
        audit_failures=audit_failures,
        wall_seconds=time.perf_counter() - t0,
    )


# -- transcript replay --------------------------------------------------------


def replay(
    factor: list[list[int]], transcript: list[TranscriptRecord], n: int
) -> list[int]:
    """Re-apply a transcript to its initial 2-factor; returns the final path
    (a Hamilton cycle's vertex order when the transcript ends with a spanning
    close)."""
    cycles = [list(c) for c in factor]
    broken: BrokenTwoFactor | None = None
    for rec in transcript:
        if rec.kind == "break":
            broken, brec = break_to_path(cycles, n)
            if brec.deleted != rec.deleted:
                raise ValueError("break edge mismatch")
        elif rec.kind == "rotate":
            assert broken is not None
            a, b = rec.added
            pivot = rec.pivot
            endpoint = b if a == pivot else a
            if broken.path[0] == endpoint:
                broken.path = broken.path[::-1]
            if broken.path[-1] != endpoint:
                raise ValueError(f"rotation endpoint {endpoint} is not a path end")
            new_path, deleted, added = rotate(broken.path, pivot)
            if deleted != rec.deleted or added != rec.added:
                raise ValueError("rotation edge mismatch")
            broken.path = new_path
        elif rec.kind == "absorb":
            assert broken is not None
            a, b = rec.added
            tail = broken.path[-1]
            head = broken.path[0]
            if a == tail or b == tail:
                pass
            elif a == head or b == head:
                broken.path = broken.path[::-1]
            entry = b if a == broken.path[-1] else a
            added, deleted = absorb_cycle(broken, entry)
            if added != rec.added or deleted != rec.deleted:
                raise ValueError("absorb edge mismatch")
        elif rec.kind == "close":
            assert broken is not None
            if norm_edge(broken.path[0], broken.path[-1]) != rec.added:
                raise ValueError("closing edge does not join the endpoints")
            if rec.deleted is None:
                return list(broken.path)
            cstar = list(broken.path)
            k = len(cstar)
            u, v = rec.deleted
            yi = None
            for i, y in enumerate(cstar):
                if y == u and cstar[(i + 1) % k] == v:
                    yi = i
                    break
                if y == v and cstar[(i + 1) % k] == u:
                    yi = i
                    break
            if yi is None:
                raise ValueError("reopened edge not on the closed cycle")
            broken.path = cstar[yi + 1 :] + cstar[: yi + 1]
        else:
            raise ValueError(f"unknown record kind {rec.kind}")
    assert broken is not None
    return list(broken.path)
