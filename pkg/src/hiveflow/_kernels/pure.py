"""Pure-Python kernels: residual mask construction and BFS shortest path.

The compiled module ``_fast`` mirrors these two functions exactly; tests
assert both produce identical paths.
"""

from __future__ import annotations

from typing import Optional

import numpy as np


def build_masks(sigma, minus_turns, minus_src, minus_slot, turn_alive, slot_alive) -> None:
    """Kill the negative slack contributions of every flat rhombus (in place)."""
    flat = sigma == 0
    if flat.any():
        turn_alive[minus_turns[flat].ravel()] = 0
        slot_alive[minus_src[flat].ravel(), minus_slot[flat].ravel()] = 0


def _adj_lists(tg):
    if tg.adj_list is None:
        tg.adj_list = (
            tg.adj[:, 0].tolist(),
            tg.adj[:, 1].tolist(),
            tg.gate_kind.tolist(),
            tg.in_edge.tolist(),
            tg.out_edge.tolist(),
            tg.s_turns.tolist(),
        )
    return tg.adj_list


def run_phase(tg, delta, caps, border_kind, step,
              slack_e1, slack_s1, slack_e2, slack_s2,
              minus_turns, minus_src, minus_slot) -> tuple:
    """One scaling phase: augment along shortest s-t paths of quantum `step`
    until none remains.  Mutates delta; returns (augmentations, bfs_calls).

    The BFS expands whole layers with numpy while reproducing plain FIFO
    semantics exactly: candidate targets are generated in (queue position,
    slot) order and the first discoverer wins, so parents and the found path
    match the scalar kernel.  Slack-driven deletions are maintained
    incrementally through kill counters.
    """
    adj = tg.adj
    gk = tg.gate_kind
    ein = tg.in_edge
    eout = tg.out_edge
    upright = tg.upright
    s_list = tg.s_turns
    rho_ptr = tg.edge_rho_indptr.tolist()
    rho_idx = tg.edge_rho_indices.tolist()

    nturns = gk.shape[0]
    nrho = slack_e1.shape[0]
    d = delta  # mutated in place
    e1l = slack_e1.tolist()
    s1l = slack_s1.tolist()
    e2l = slack_e2.tolist()
    s2l = slack_s2.tolist()
    mtl = minus_turns.tolist()
    msl = minus_src.tolist()
    msll = minus_slot.tolist()

    kill = np.zeros(nturns, dtype=np.int32)
    skill = np.zeros((nturns, 2), dtype=np.int32)
    flat = [False] * nrho
    parent = np.empty(nturns, dtype=np.int32)  # caller-local scratch

    sigma0 = slack_s1 * d[slack_e1] + slack_s2 * d[slack_e2]
    flat_idx = np.flatnonzero(sigma0 == 0)
    if flat_idx.size:
        np.add.at(kill, minus_turns[flat_idx].ravel(), 1)
        np.add.at(skill, (minus_src[flat_idx].ravel(),
                          minus_slot[flat_idx].ravel()), 1)
        for i in flat_idx.tolist():
            flat[i] = True

    border = np.flatnonzero(border_kind)
    bkb = border_kind[border]
    capb = caps[border]
    sign = np.where(bkb == 3, -1, 1).astype(np.int64)
    gate = np.zeros(border_kind.shape[0], dtype=bool)

    adj0l, adj1l, gkl, einl, eoutl, _sl = _adj_lists(tg)
    uprightl = upright.tolist()
    # thin BFS layers expand faster in a scalar loop; wide ones in numpy
    scalar_below = 24
    naug = 0
    nbfs = 0
    while True:
        gate[border] = sign * d[border] + step <= capb
        gatel = gate.tolist()
        parent.fill(-2)
        kill_ok = kill == 0
        slot_ok = skill == 0  # (nturns, 2)
        frontier = s_list[kill_ok[s_list] & gate[ein[s_list]]]
        parent[frontier] = -1
        found = -1
        nbfs += 1
        while frontier.size:
            if frontier.size < scalar_below:
                fl = frontier.tolist()
                nxt = []
                for u in fl:
                    k = gkl[u]
                    if k == 0:
                        v = adj0l[u]
                        if parent[v] == -2 and slot_ok[u, 0] and kill_ok[v]:
                            parent[v] = u
                            nxt.append(v)
                        v = adj1l[u]
                        if parent[v] == -2 and slot_ok[u, 1] and kill_ok[v]:
                            parent[v] = u
                            nxt.append(v)
                    elif k == 2 and gatel[eoutl[u]]:
                        found = u
                        break
                if found >= 0:
                    break
                frontier = np.asarray(nxt, dtype=np.int32)
                continue
            hits = np.flatnonzero((gk[frontier] == 2) & gate[eout[frontier]])
            if hits.size:
                found = int(frontier[hits[0]])
                break
            us = frontier[gk[frontier] == 0]
            if not us.size:
                break
            cands = adj[us].ravel()
            srcs = np.repeat(us, 2)
            ok = slot_ok[us].ravel() & kill_ok[cands] & (parent[cands] == -2)
            cands = cands[ok]
            srcs = srcs[ok]
            if not cands.size:
                break
            # reversed fancy assignment makes the FIRST discoverer win, which
            # reproduces the scalar FIFO parent choice
            parent[cands[::-1]] = srcs[::-1]
            frontier = cands[parent[cands] == srcs]
        if found < 0:
            break
        naug += 1
        # walk the path, apply the quantum, collect touched edges
        touched = []
        u = found
        while u >= 0:
            if uprightl[u]:
                a = einl[u]
                b = eoutl[u]
                d[a] += step
                d[b] -= step
                touched.append(a)
                touched.append(b)
            u = int(parent[u])
        for e in set(touched):
            for j in range(rho_ptr[e], rho_ptr[e + 1]):
                i = rho_idx[j]
                now = s1l[i] * int(d[e1l[i]]) + s2l[i] * int(d[e2l[i]]) == 0
                if now != flat[i]:
                    flat[i] = now
                    bump = 1 if now else -1
                    a, b = mtl[i]
                    kill[a] += bump
                    kill[b] += bump
                    skill[msl[i][0], msll[i][0]] += bump
                    skill[msl[i][1], msll[i][1]] += bump
    return naug, nbfs


def shortest_path(adj, gate_kind, s_turns, in_edge, out_edge,
                  turn_alive, slot_alive, gate_open,
                  parent_buf, queue_buf, tg) -> Optional[list]:
    """FIFO BFS from s; first open t-gate popped wins.  Returns turn ids."""
    adj0, adj1, gkind, ein, eout, s_list = _adj_lists(tg)
    alive = turn_alive.tolist()
    sa0 = slot_alive[:, 0].tolist()
    sa1 = slot_alive[:, 1].tolist()
    gopen = gate_open.tolist()

    parent = [-2] * len(alive)
    queue = []
    push = queue.append
    for v in s_list:
        if alive[v] and gopen[ein[v]]:
            parent[v] = -1
            push(v)
    head = 0
    found = -1
    while head < len(queue):
        u = queue[head]
        head += 1
        k = gkind[u]
        if k == 2 and gopen[eout[u]]:
            found = u
            break
        if k == 0:
            v = adj0[u]
            if sa0[u] and alive[v] and parent[v] == -2:
                parent[v] = u
                push(v)
            v = adj1[u]
            if sa1[u] and alive[v] and parent[v] == -2:
                parent[v] = u
                push(v)
    if found < 0:
        return None
    path = [found]
    while parent[path[-1]] != -1:
        path.append(parent[path[-1]])
    path.reverse()
    return path
