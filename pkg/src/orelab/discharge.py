"""Discharging engine: initial charges and Rules 0, i (iterated) and T.

Charges are scaled by five like potentials: ``ch(v) = d(v) - 3.2`` becomes
``5 d(v) - 16``.  Every round is synchronous: transfers are decided from a
snapshot of the charges and then applied together.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations

from .graph import Graph, bits

RULE0_AMOUNT = 2   # 0.4
RULE_I_AMOUNT = 2  # 0.4
RULE_T_AMOUNT = 1  # 0.2
TARGET = 3         # 0.6


@dataclass(frozen=True)
class Transfer:
    round: int
    rule: str
    sender: int
    receiver: int
    amount: int

    def to_json(self) -> dict:
        return {"round": self.round, "rule": self.rule, "from": self.sender,
                "to": self.receiver, "amount_scaled": self.amount}


@dataclass(frozen=True)
class ChargeState:
    charges: tuple[int, ...]
    round: int = 0
    sent: frozenset[tuple[int, int]] = frozenset()
    transcript: tuple[Transfer, ...] = field(default=(), repr=False)

    @property
    def total(self) -> int:
        return sum(self.charges)


def initial_charges(g: Graph) -> ChargeState:
    return ChargeState(tuple(5 * d - 16 for d in g.degrees()))


def _apply(state: ChargeState, moves: list[Transfer], next_round: int) -> ChargeState:
    ch = list(state.charges)
    for t in moves:
        ch[t.sender] -= t.amount
        ch[t.receiver] += t.amount
    return ChargeState(
        tuple(ch),
        next_round,
        state.sent | {(t.sender, t.receiver) for t in moves},
        state.transcript + tuple(moves),
    )


def apply_rule0(g: Graph, state: ChargeState) -> ChargeState:
    """Each degree-3 vertex in a triangle gets 0.4 from both other corners, once per triangle."""
    if state.round != 0:
        raise ValueError("Rule 0 runs only on the initial state")
    deg = g.degrees()
    moves = []
    for v in range(g.n):
        if deg[v] != 3:
            continue
        for w1, w2 in combinations(bits(g.adj[v]), 2):
            if g.has_edge(w1, w2):
                moves.append(Transfer(0, "0", w1, v, RULE0_AMOUNT))
                moves.append(Transfer(0, "0", w2, v, RULE0_AMOUNT))
    return _apply(state, moves, 1)


def rule_i_targets(g: Graph, charges: tuple[int, ...], v: int) -> list[int]:
    """``N_i(v)``: degree-3 neighbours still below 0.6."""
    return [u for u in bits(g.adj[v]) if g.degree(u) == 3 and charges[u] < TARGET]


def apply_rule_i(g: Graph, state: ChargeState) -> tuple[ChargeState, bool]:
    if state.round < 1:
        raise ValueError("Rule i runs after Rule 0")
    ch = state.charges
    moves = []
    for v in range(g.n):
        if g.degree(v) < 4:
            continue
        targets = rule_i_targets(g, ch, v)
        if targets and ch[v] >= RULE_I_AMOUNT * len(targets):
            moves.extend(Transfer(state.round, "i", v, u, RULE_I_AMOUNT) for u in targets)
    if not moves:
        return state, False
    return _apply(state, moves, state.round + 1), True


def apply_rule_T(g: Graph, state: ChargeState) -> ChargeState:
    """Vertices of degree at least four send 0.2 to each needy degree-3 neighbour not yet served."""
    ch = state.charges
    moves = []
    for v in range(g.n):
        if g.degree(v) < 4:
            continue
        for u in bits(g.adj[v]):
            if g.degree(u) == 3 and ch[u] < TARGET and (v, u) not in state.sent:
                moves.append(Transfer(state.round, "T", v, u, RULE_T_AMOUNT))
    return _apply(state, moves, state.round + 1)


@dataclass(frozen=True)
class DischargeResult:
    initial: ChargeState
    final: ChargeState
    rule_i_rounds: int

    @property
    def transcript(self) -> tuple[Transfer, ...]:
        return self.final.transcript

    def transcript_lines(self) -> list[str]:
        return [json.dumps(t.to_json(), sort_keys=True) for t in self.transcript]


def run_discharging(g: Graph, max_rounds: int | None = None) -> DischargeResult:
    """Rule 0, then Rule i until nothing moves, then Rule T."""
    start = initial_charges(g)
    state = apply_rule0(g, start)
    rounds = 0
    limit = max_rounds if max_rounds is not None else 10 * (g.n + 1) ** 2
    while True:
        state, fired = apply_rule_i(g, state)
        if not fired:
            break
        rounds += 1
        if rounds > limit:
            raise RuntimeError("Rule i did not reach a fixpoint")
    state = apply_rule_T(g, state)
    return DischargeResult(start, state, rounds)
