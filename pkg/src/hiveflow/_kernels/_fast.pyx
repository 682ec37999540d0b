# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled twin of the pure kernels (see pure.py for the reference)."""

import numpy as np


def build_masks(sigma, minus_turns, minus_src, minus_slot, turn_alive, slot_alive):
    cdef const long long[::1] sig = sigma
    cdef const int[:, ::1] mt = minus_turns
    cdef const int[:, ::1] ms = minus_src
    cdef const signed char[:, ::1] msl = minus_slot
    cdef unsigned char[::1] ta = turn_alive
    cdef unsigned char[:, ::1] sa = slot_alive
    cdef Py_ssize_t i
    cdef Py_ssize_t nr = sig.shape[0]
    for i in range(nr):
        if sig[i] == 0:
            ta[mt[i, 0]] = 0
            ta[mt[i, 1]] = 0
            sa[ms[i, 0], msl[i, 0]] = 0
            sa[ms[i, 1], msl[i, 1]] = 0


def run_phase(tg, delta, caps, border_kind, step,
              slack_e1, slack_s1, slack_e2, slack_s2,
              minus_turns, minus_src, minus_slot):
    """One scaling phase with incremental slack bookkeeping; see pure.run_phase."""
    cdef const int[:, ::1] a = tg.adj
    cdef const signed char[::1] gk = tg.gate_kind
    cdef const int[::1] s_list = tg.s_turns
    cdef const int[::1] ein = tg.in_edge
    cdef const int[::1] eout = tg.out_edge
    cdef const signed char[::1] up = tg.upright
    cdef const int[::1] rho_ptr = tg.edge_rho_indptr
    cdef const int[::1] rho_idx = tg.edge_rho_indices

    cdef long long[::1] d = delta
    cdef const long long[::1] cap = caps
    cdef const signed char[::1] bk = border_kind
    cdef long long qstep = step
    cdef const int[::1] e1 = slack_e1
    cdef const long long[::1] s1 = slack_s1
    cdef const int[::1] e2 = slack_e2
    cdef const long long[::1] s2 = slack_s2
    cdef const int[:, ::1] mt = minus_turns
    cdef const int[:, ::1] ms = minus_src
    cdef const signed char[:, ::1] msl = minus_slot

    cdef Py_ssize_t nt = gk.shape[0]
    cdef Py_ssize_t ne = bk.shape[0]
    cdef Py_ssize_t nr = e1.shape[0]

    kill_np = np.zeros(nt, dtype=np.int32)
    skill_np = np.zeros(2 * nt, dtype=np.int32)
    flat_np = np.zeros(nr, dtype=np.uint8)
    gate_np = np.zeros(ne, dtype=np.uint8)
    touched_np = np.empty(2 * nt, dtype=np.int32)
    seen_np = np.zeros(ne, dtype=np.uint8)
    parent_np = np.empty(nt, dtype=np.int32)
    queue_np = np.empty(nt, dtype=np.int32)
    cdef int[::1] kill = kill_np
    cdef int[::1] skill = skill_np
    cdef unsigned char[::1] flat = flat_np
    cdef unsigned char[::1] gopen = gate_np
    cdef int[::1] touched = touched_np
    cdef unsigned char[::1] seen = seen_np
    cdef int[::1] parent = parent_np
    cdef int[::1] queue = queue_np

    cdef Py_ssize_t i, j
    cdef int u, v, found, head, tail, e, r, ntouch, bump
    cdef long long inward
    cdef int naug = 0
    cdef int nbfs = 0
    cdef bint now

    for i in range(nr):
        if s1[i] * d[e1[i]] + s2[i] * d[e2[i]] == 0:
            flat[i] = 1
            kill[mt[i, 0]] += 1
            kill[mt[i, 1]] += 1
            skill[2 * ms[i, 0] + msl[i, 0]] += 1
            skill[2 * ms[i, 1] + msl[i, 1]] += 1

    while True:
        for i in range(ne):
            if bk[i] == 0:
                gopen[i] = 0
            else:
                inward = -d[i] if bk[i] == 3 else d[i]
                gopen[i] = 1 if inward + qstep <= cap[i] else 0

        for i in range(nt):
            parent[i] = -2
        head = 0
        tail = 0
        for i in range(s_list.shape[0]):
            v = s_list[i]
            if kill[v] == 0 and gopen[ein[v]]:
                parent[v] = -1
                queue[tail] = v
                tail += 1
        found = -1
        nbfs += 1
        while head < tail:
            u = queue[head]
            head += 1
            if gk[u] == 0:
                v = a[u, 0]
                if parent[v] == -2 and skill[2 * u] == 0 and kill[v] == 0:
                    parent[v] = u
                    queue[tail] = v
                    tail += 1
                v = a[u, 1]
                if parent[v] == -2 and skill[2 * u + 1] == 0 and kill[v] == 0:
                    parent[v] = u
                    queue[tail] = v
                    tail += 1
            elif gk[u] == 2 and gopen[eout[u]]:
                found = u
                break
        if found < 0:
            break
        naug += 1
        # apply the path (upright turns only carry the crossing) and collect
        # the touched edges for incremental slack updates
        ntouch = 0
        u = found
        while u >= 0:
            if up[u]:
                e = ein[u]
                d[e] += qstep
                if not seen[e]:
                    seen[e] = 1
                    touched[ntouch] = e
                    ntouch += 1
                e = eout[u]
                d[e] -= qstep
                if not seen[e]:
                    seen[e] = 1
                    touched[ntouch] = e
                    ntouch += 1
            u = parent[u]
        for j in range(ntouch):
            e = touched[j]
            seen[e] = 0
            for i in range(rho_ptr[e], rho_ptr[e + 1]):
                r = rho_idx[i]
                now = (s1[r] * d[e1[r]] + s2[r] * d[e2[r]] == 0)
                if now != flat[r]:
                    flat[r] = now
                    bump = 1 if now else -1
                    kill[mt[r, 0]] += bump
                    kill[mt[r, 1]] += bump
                    skill[2 * ms[r, 0] + msl[r, 0]] += bump
                    skill[2 * ms[r, 1] + msl[r, 1]] += bump
    return naug, nbfs


def shortest_path(adj, gate_kind, s_turns, in_edge, out_edge,
                  turn_alive, slot_alive, gate_open,
                  parent_buf, queue_buf, tg):
    cdef const int[:, ::1] a = adj
    cdef const signed char[::1] gk = gate_kind
    cdef const int[::1] s_list = s_turns
    cdef const int[::1] ein = in_edge
    cdef const int[::1] eout = out_edge
    cdef const unsigned char[::1] alive = turn_alive
    cdef const unsigned char[:, ::1] sa = slot_alive
    cdef const unsigned char[::1] gopen = gate_open
    cdef int[::1] parent = parent_buf
    cdef int[::1] queue = queue_buf

    cdef Py_ssize_t nt = alive.shape[0]
    cdef Py_ssize_t i
    cdef int u, v, found, head, tail
    for i in range(nt):
        parent[i] = -2
    head = 0
    tail = 0
    for i in range(s_list.shape[0]):
        v = s_list[i]
        if alive[v] and gopen[ein[v]]:
            parent[v] = -1
            queue[tail] = v
            tail += 1
    found = -1
    while head < tail:
        u = queue[head]
        head += 1
        if gk[u] == 2:
            if gopen[eout[u]]:
                found = u
                break
        elif gk[u] == 0:
            v = a[u, 0]
            if sa[u, 0] and alive[v] and parent[v] == -2:
                parent[v] = u
                queue[tail] = v
                tail += 1
            v = a[u, 1]
            if sa[u, 1] and alive[v] and parent[v] == -2:
                parent[v] = u
                queue[tail] = v
                tail += 1
    if found < 0:
        return None
    path = [found]
    u = found
    while parent[u] != -1:
        u = parent[u]
        path.append(u)
    path.reverse()
    return path
