"""Outerplanarity recognition by degree-2 reduction, and Hamiltonian cycle orientation."""
from __future__ import annotations

import dataclasses

from .errors import NotOuterplanarError
from .graph import Graph, RootedBlockTree, blocks_and_cut_vertices


@dataclasses.dataclass(frozen=True)
class OuterplanarCertificate:
    verdict: bool
    ham_cycles: tuple = ()  # per block id; None for trivial blocks
    witness: dict | None = None
    block_tree: RootedBlockTree | None = dataclasses.field(default=None, repr=False, compare=False)

    def __bool__(self):
        return self.verdict


def _chords_cross(pos: dict, m: int, edges) -> tuple | None:
    """Return a crossing chord pair, or None when the chords are laminar."""
    opens: list[list[int]] = [[] for _ in range(m)]
    closes: list[list[int]] = [[] for _ in range(m)]
    for u, v in edges:
        a, b = pos[u], pos[v]
        if a > b:
            a, b = b, a
        if b - a == 1 or (a == 0 and b == m - 1):
            continue
        opens[a].append(b)
        closes[b].append(a)
    stack: list[tuple[int, int]] = []
    for i in range(m):
        if closes[i]:
            for a in sorted(closes[i], reverse=True):
                if stack[-1] != (a, i):
                    return stack[-1], (a, i)
                stack.pop()
        if opens[i]:
            for b in sorted(opens[i], reverse=True):
                stack.append((i, b))
    return None


def block_hamiltonian_cycle(vertices, edges):
    """Outer cycle of one 2-connected block, or ``(None, witness)`` if it is not outerplanar.

    Repeatedly removes a degree-2 vertex ``v`` with neighbors ``u, w``, adding the
    virtual edge ``uw`` when absent, until a triangle remains; the cycle is then
    rebuilt by reinserting vertices in reverse removal order and checked against
    the real edges (consecutive pairs are edges, chords do not cross).
    """
    k = len(vertices)
    if k == 2:
        return None, None
    if len(edges) > 2 * k - 3:
        return None, {"kind": "edge-count", "vertices": k, "edges": len(edges)}
    adj = {v: set() for v in vertices}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    queue = [v for v in vertices if len(adj[v]) == 2]
    removed = []
    alive = k
    while alive > 3:
        v = None
        while queue:
            c = queue.pop()
            if c in adj and len(adj[c]) == 2:
                v = c
                break
        if v is None:
            return None, {"kind": "stuck", "remaining": sorted(adj)}
        u, w = adj.pop(v)
        adj[u].discard(v)
        adj[w].discard(v)
        alive -= 1
        removed.append((v, u, w))
        if w in adj[u]:
            for z in (u, w):
                if len(adj[z]) == 2:
                    queue.append(z)
                elif len(adj[z]) < 2:
                    return None, {"kind": "stuck", "remaining": sorted(adj)}
        else:
            adj[u].add(w)
            adj[w].add(u)
    a, b, c = sorted(adj)
    if not (b in adj[a] and c in adj[a] and c in adj[b]):
        return None, {"kind": "stuck", "remaining": [a, b, c]}
    succ = {a: b, b: c, c: a}
    pred = {b: a, c: b, a: c}
    for v, u, w in reversed(removed):
        if succ[u] == w:
            lo, hi = u, w
        elif succ[w] == u:
            lo, hi = w, u
        else:
            return None, {"kind": "not-hamiltonian", "vertex": v, "between": sorted((u, w))}
        succ[lo] = v
        pred[v] = lo
        succ[v] = hi
        pred[hi] = v
    s = min(vertices)
    cyc = [s]
    x = succ[s]
    while x != s:
        cyc.append(x)
        x = succ[x]
    if len(cyc) != k:
        return None, {"kind": "not-hamiltonian", "cycle": cyc}
    if cyc[1] > cyc[-1]:
        cyc = [s] + cyc[:0:-1]
    pos = {v: i for i, v in enumerate(cyc)}
    esets = set(edges)
    for i in range(k):
        p, q = cyc[i], cyc[(i + 1) % k]
        if (p, q) not in esets and (q, p) not in esets:
            return None, {"kind": "virtual-outer-edge", "edge": sorted((p, q))}
    crossing = _chords_cross(pos, k, edges)
    if crossing is not None:
        (a1, b1), (a2, b2) = crossing
        return None, {
            "kind": "crossing-chords",
            "chords": [sorted((cyc[a1], cyc[b1])), sorted((cyc[a2], cyc[b2]))],
        }
    return tuple(cyc), None


def check_outerplanar(g: Graph, bt: RootedBlockTree | None = None) -> OuterplanarCertificate:
    """Decide outerplanarity of a connected graph, block by block."""
    if bt is None:
        bt = blocks_and_cut_vertices(g)
    cycles = []
    for b, (vs, es) in enumerate(zip(bt.blocks, bt.block_edges)):
        cyc, witness = block_hamiltonian_cycle(vs, es)
        if witness is not None:
            witness = dict(witness, block=b, block_vertices=list(vs))
            return OuterplanarCertificate(False, (), witness, bt)
        cycles.append(cyc)
    return OuterplanarCertificate(True, tuple(cycles), None, bt)


def fix_clockwise_order(
    cert: OuterplanarCertificate, bt: RootedBlockTree, reverse: bool = False
) -> RootedBlockTree:
    """Populate Hamiltonian cycles, successor maps and first/last vertices.

    The default orientation starts at the smallest vertex of the block and moves
    to its smaller cycle neighbor; ``reverse`` selects the opposite orientation.
    """
    if not cert.verdict:
        raise NotOuterplanarError("graph is not outerplanar", cert)
    cycles = []
    succ = []
    first = []
    last = []
    for b, vs in enumerate(bt.blocks):
        cyc = cert.ham_cycles[b]
        if cyc is None:
            u, w = vs
            succ.append({u: w, w: u})
            cycles.append(None)
        else:
            if reverse:
                cyc = (cyc[0],) + tuple(reversed(cyc[1:]))
            cycles.append(cyc)
            k = len(cyc)
            succ.append({cyc[i]: cyc[(i + 1) % k] for i in range(k)})
        x = bt.attach[b]
        if x < 0:
            first.append(-1)
            last.append(-1)
        elif cyc is None:
            other = vs[0] if vs[1] == x else vs[1]
            first.append(other)
            last.append(other)
        else:
            i = cycles[b].index(x)
            first.append(cycles[b][(i + 1) % len(cyc)])
            last.append(cycles[b][i - 1])
    return dataclasses.replace(
        bt, ham_cycle=tuple(cycles), first=tuple(first), last=tuple(last), _succ=tuple(succ)
    )


def rooted_block_tree(g: Graph, root: int | None = None, reverse: bool = False) -> RootedBlockTree:
    """Block tree with Hamiltonian cycles; raises :class:`NotOuterplanarError`."""
    bt = blocks_and_cut_vertices(g, root=root)
    cert = check_outerplanar(g, bt)
    if not cert.verdict:
        raise NotOuterplanarError(f"graph is not outerplanar: {cert.witness['kind']}", cert)
    return fix_clockwise_order(cert, bt, reverse=reverse)


def is_outerplanar(g: Graph) -> bool:
    return check_outerplanar(g).verdict
