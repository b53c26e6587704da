"""Generate the committed fixture surfaces and their oracle manifest.

Needs regina, snappy, sympy and the veering package (census tools) on the
path. Every number written to the manifest comes from this script, which
shares no code with the Rust crates.
"""
import itertools
import json
import sys
from pathlib import Path

import regina
import snappy
import sympy

from veering.taut import isosig_to_tri_angle, vert_pair_to_edge_num
from veering.transverse_taut import is_transverse_taut
from veering.veering_tri import is_veering

FIXTURES = {
    "f8": "cPcbbbiht_12",
    "c2": "eLMkbcddddedde_2100",
    "m003": "cPcbbbdxm_10",
    "m016": "dLQacccjsnk_200",
    "m009": "dLQbccchhfo_122",
    "m010": "dLQbccchhsj_122",
    "m119": "eLAkaccddjsnak_2001",
    "m125": "fLLQcbeddeehhbghh_01110",
    "m367": "fLLQcbecdeepuwsua_20102",
}


def dual_surface(sig):
    tri, angle = isosig_to_tri_angle(sig)
    n = tri.size()
    coor = is_transverse_taut(tri, angle, return_type="tet_vert_coorientations")
    cols = is_veering(tri, angle, return_type="veering_colours")
    edges = []
    for f in tri.triangles():
        e0, e1 = f.embedding(0), f.embedding(1)
        t0, i0 = e0.simplex().index(), e0.vertices()[3]
        t1 = e1.simplex().index()
        edges.append((t0, t1) if coor[t0][i0] == 1 else (t1, t0))
    botdiag = []
    for t in range(n):
        bots = tuple(i for i in range(4) if coor[t][i] == 1)
        botdiag.append(tri.tetrahedron(t).edge(vert_pair_to_edge_num[bots]).index())
    sectors = []
    for E in tri.edges():
        embs = list(E.embeddings())
        d = len(embs)
        info = []
        for em in embs:
            t = em.tetrahedron().index()
            en = em.face()
            info.append((t, em.vertices(), angle[t] == (en if en < 3 else 5 - en)))
        between = []
        for i in range(d):
            t, vp, _ = info[i]
            between.append(tri.tetrahedron(t).triangle(vp[2]).index())
        pis = [i for i in range(d) if info[i][2]]
        assert len(pis) == 2
        bc = [i for i in pis if coor[info[i][0]][info[i][1][2]] == 1 and coor[info[i][0]][info[i][1][3]] == 1]
        assert len(bc) == 1
        bc = bc[0]
        tc = [i for i in pis if i != bc][0]
        pa, i = [], bc
        while i != tc:
            pa.append(between[i])
            i = (i + 1) % d
        pb, i = [], bc
        while i != tc:
            i = (i - 1) % d
            pb.append(between[i])
        sectors.append((pa, pb))
    # smooth pairs are the consecutive pairs inside top sides
    smooth = {v: [] for v in range(n)}
    for pa, pb in sectors:
        for p in (pa, pb):
            for x, y in zip(p[1:], p[2:]):
                smooth[edges[x][1]].append([x, y])
    raw = {
        "name": None,
        "triple_points": [{"id": t, "color": cols[botdiag[t]]} for t in range(n)],
        "edges": [{"id": i, "src": s, "dst": d} for i, (s, d) in enumerate(edges)],
        "smooth_pairing": [{"vertex": v, "pairs": sorted(smooth[v])} for v in range(n)],
        "sectors": [{"id": i, "path_a": pa, "path_b": pb} for i, (pa, pb) in enumerate(sectors)],
    }
    return tri, raw


def follow(edges, succ):
    seen, loops = set(), []
    for e0 in range(len(edges)):
        if e0 in seen:
            continue
        loop, e = [], e0
        while e not in seen:
            seen.add(e)
            loop.append(e)
            e = succ[e]
        loops.append(loop)
    return loops


def analyse(raw):
    n = len(raw["triple_points"])
    edges = [(e["src"], e["dst"]) for e in raw["edges"]]
    sectors = [(s["path_a"], s["path_b"]) for s in raw["sectors"]]
    smooth = {}
    for sp in raw["smooth_pairing"]:
        for a, b in sp["pairs"]:
            smooth[a] = b
    turn = {}
    for a in smooth:
        v = edges[a][1]
        outs = [e for e in range(2 * n) if edges[e][0] == v]
        turn[a] = [o for o in outs if o != smooth[a]][0] if len(set(outs)) == 2 else outs[0]
    branch = follow(edges, smooth)
    anti = follow(edges, turn)
    bottom = [edges[pa[0]][0] for pa, _ in sectors]
    top = [edges[pa[-1]][1] for pa, _ in sectors]
    # canonical numbering: vertex bottom(S_i) gets index i
    canon = {v: i for i, v in enumerate(bottom)}
    assert len(canon) == n
    corners = []
    for i, (pa, pb) in enumerate(sectors):
        corners.append([("bottom", bottom[i]), ("top", top[i]),
                        ("side_a", edges[pa[0]][1]), ("side_b", edges[pb[0]][1])])
    states = []
    for choice in itertools.product(range(4), repeat=n):
        verts = [corners[i][c][1] for i, c in enumerate(choice)]
        if len(set(verts)) != n:
            continue
        perm = [canon[v] for v in verts]
        inv = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        sides = sum(1 for c in choice if c >= 2)
        states.append((choice, (inv + sides) % 2))
    return edges, sectors, branch, anti, corners, states, smooth


def cocycle_basis(n, edges, sectors):
    m = sympy.zeros(n, 2 * n)
    for i, (pa, pb) in enumerate(sectors):
        for e in pa:
            m[i, e] += 1
        for e in pb:
            m[i, e] -= 1
    kern = m.nullspace()
    cob = sympy.zeros(n, 2 * n)
    for e, (s, d) in enumerate(edges):
        cob[d, e] += 1
        cob[s, e] -= 1
    chosen = []
    current = cob.T
    for v in kern:
        den = sympy.ilcm(*[x.q for x in v])
        w = (v * den)
        g = sympy.igcd(*[int(x) for x in w])
        w = w / g
        trial = current.row_join(w)
        if trial.rank() > current.rank():
            current = trial
            chosen.append([int(x) for x in w])
    return chosen


def mono(phis, path):
    return tuple(sum(phi[e] for e in path) for phi in phis)


def canonical(poly):
    poly = {k: v for k, v in poly.items() if v != 0}
    if not poly:
        return []
    lead = max(poly, key=lambda k: (sum(k), k))
    sign = 1 if poly[lead] > 0 else -1
    out = {tuple(a - b for a, b in zip(k, lead)): sign * v for k, v in poly.items()}
    return sorted([list(k), v] for k, v in out.items())


def to_sympy(poly, xs):
    return sum(c * sympy.prod([x ** a for x, a in zip(xs, k)]) for k, c in poly.items())


def from_sympy(expr, xs, b):
    expr = sympy.expand(expr)
    if expr == 0:
        return {}
    p = sympy.Poly(expr, *xs) if b else None
    if b == 0:
        return {(): int(expr)}
    return {tuple(int(a) for a in k): int(c) for k, c in p.terms()}


def laurent_matrix(cols, n, b, xs):
    """cols: list of dict sector->dict exponent->coef. Returns sympy matrix with
    each column shifted to polynomial entries."""
    mat = sympy.zeros(n, len(cols))
    for j, col in enumerate(cols):
        exps = [k for entry in col.values() for k in entry]
        lo = [min(k[i] for k in exps) for i in range(b)] if exps else [0] * b
        for s, entry in col.items():
            shifted = {tuple(a - l for a, l in zip(k, lo)): c for k, c in entry.items()}
            mat[s, j] = to_sympy(shifted, xs)
    return mat


def polynomials(n, edges, sectors, smooth, phis, branch, anti):
    b = len(phis)
    xs = sympy.symbols(f"x0:{b}")
    face_cols = []
    for e in range(2 * n):
        col = {}
        for s, (pa, pb) in enumerate(sectors):
            for p in (pa, pb):
                for j, f in enumerate(p):
                    if f == e:
                        k = mono(phis, p[:j])
                        entry = col.setdefault(s, {})
                        entry[k] = entry.get(k, 0) + (1 if j > 0 else -1)
        face_cols.append(col)
    def vertex_cols(kind):
        cols = []
        for v in range(n):
            col = {}
            def add(s, k, c):
                entry = col.setdefault(s, {})
                entry[k] = entry.get(k, 0) + c
            for s, (pa, pb) in enumerate(sectors):
                if edges[pa[-1]][1] == v:
                    add(s, mono(phis, pa), 1)
                if edges[pa[0]][0] == v:
                    add(s, mono(phis, []), -1 if kind == "tet" else 1)
                for p in (pa, pb):
                    if kind == "anti" and edges[p[0]][1] == v:
                        add(s, mono(phis, p[:1]), -1)
                    if kind == "tet":
                        for j in range(1, len(p) - 1):
                            if edges[p[j]][1] == v:
                                add(s, mono(phis, p[: j + 1]), 1)
            cols.append(col)
        return cols
    face = laurent_matrix(face_cols, n, b, xs)
    minors = []
    for cs in itertools.combinations(range(2 * n), n):
        minors.append(sympy.expand(face.extract(list(range(n)), list(cs)).det()))
    theta = 0
    for mnr in minors:
        theta = sympy.gcd(theta, mnr)
    veer = sympy.expand(laurent_matrix(vertex_cols("tet"), n, b, xs).det())
    antiv = sympy.expand(laurent_matrix(vertex_cols("anti"), n, b, xs).det())
    out = {
        "theta": canonical(from_sympy(theta, xs, b)),
        "veering": canonical(from_sympy(veer, xs, b)),
        "antiveering": canonical(from_sympy(antiv, xs, b)),
    }
    def prod_loops(loops, sgn):
        expr = sympy.Integer(1)
        for lp in loops:
            mon = to_sympy({mono(phis, lp): 1}, xs) if b else 1
            expr *= (1 - sgn(lp) * mon)
        return expr
    out["theta_times_branch"] = canonical(from_sympy(sympy.expand(theta * prod_loops(branch, lambda lp: 1)), xs, b))
    out["theta_times_anti"] = canonical(from_sympy(
        sympy.expand(theta * prod_loops(anti, lambda lp: 1 if len(lp) % 2 == 0 else -1)), xs, b))
    return out


def main(out_dir):
    out_dir = Path(out_dir)
    manifest = {}
    census_lines = []
    data = Path(__import__("veering").__file__).parent / "data" / "veering_census.txt"
    for line in open(data):
        sig = line.split()[0]
        if sig[0] in "cde":
            census_lines.append(sig)
    census_lines += [FIXTURES["m125"], FIXTURES["m367"]]
    (out_dir / "census_small.txt").write_text("\n".join(census_lines) + "\n")
    for name, sig in FIXTURES.items():
        tri, raw = dual_surface(sig)
        raw["name"] = name
        (out_dir / f"{name}.json").write_text(json.dumps(raw, indent=1) + "\n")
        n = tri.size()
        edges, sectors, branch, anti, corners, states, smooth = analyse(raw)
        h1 = tri.homology()
        phis = cocycle_basis(n, edges, sectors)
        mfd = snappy.Manifold(sig.split("_")[0])
        polys = polynomials(n, edges, sectors, smooth, phis, branch, anti)
        statesum = {}
        for choice, nu in states:
            k = [0] * len(phis)
            for i, c in enumerate(choice):
                pa, pb = sectors[i]
                path = {0: [], 1: pa, 2: pa[:1], 3: pb[:1]}[c]
                k = [a + b for a, b in zip(k, mono(phis, path))]
            statesum[tuple(k)] = statesum.get(tuple(k), 0) + (-1) ** nu
        polys["statesum"] = canonical(statesum)
        roles = ["bottom", "top", "side_a", "side_b"]
        manifest[name] = {
            "signature": sig,
            "snappy_name": mfd.identify()[0].name() if mfd.identify() else None,
            "n": n,
            "cusps": mfd.num_cusps(),
            "b1": h1.rank(),
            "torsion": [int(str(h1.invariantFactor(i))) for i in range(h1.countInvariantFactors())],
            "branch_loops": branch,
            "anti_branch_loop_lengths": sorted(len(a) for a in anti),
            "empty_domains": 2 * n,
            "elementary_domains": 2 * n + 2 * len(branch),
            "states": len(states),
            "nu_histogram": [sum(1 for _, nu in states if nu == 0), sum(1 for _, nu in states if nu == 1)],
            "state_table": [[[roles[c] for c in ch], nu] for ch, nu in states] if n <= 2 else None,
            "test_cocycles": phis,
            "branch_loop_classes": [list(mono(phis, lp)) for lp in branch],
            "polynomials": polys,
        }
        print(name, n, manifest[name]["b1"], manifest[name]["states"], polys["antiveering"], file=sys.stderr)
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=1) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "fixtures")
