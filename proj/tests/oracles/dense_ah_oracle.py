#!/usr/bin/env python3
"""Independent dense evaluation of local VEM bilinear forms with sympy.

Writes tests/fixtures/oracle_values.json. Everything here is computed from
the defining integrals with exact arithmetic; nothing is shared with the C++
implementation.

  square_k1_s1 / square_k1_s2 : local a_h matrix on the unit square, k = 1,
      vertex order (0,0),(1,0),(1,1),(0,1), for both stabilisations.
  triangle_k2_stiffness      : \int grad m_a . grad m_b on the triangle
      (0,0),(1,0),(0,1), monomials centred at the centroid, scale sqrt(2),
      ordering 1, x, y, x^2, xy, y^2.
"""
import json
import pathlib

import sympy as sp

x, y, s = sp.symbols("x y s", real=True)


def square_k1(stab):
    verts = [(0, 0), (1, 0), (1, 1), (0, 1)]
    n = len(verts)
    hD = sp.sqrt(2)
    # Edges as (start, end) with outward normal for a CCW loop.
    edges = []
    for i in range(n):
        a = sp.Matrix(verts[i])
        b = sp.Matrix(verts[(i + 1) % n])
        d = b - a
        length = sp.sqrt(d.dot(d))
        normal = sp.Matrix([d[1], -d[0]]) / length
        edges.append((i, (i + 1) % n, a, b, length, normal))

    # Boundary trace of the hat function phi_i: linear on each edge.
    def trace(i, e):
        ia, ib, a, b, length, _ = e
        return (1 - s) * (1 if ia == i else 0) + s * (1 if ib == i else 0)

    perimeter = sum(e[4] for e in edges)
    # Pi^nabla phi_i = c0 + c1 x + c2 y, fixed by
    #   \int grad(Pi phi) . grad q = \int_{dD} phi (n . grad q)   for q = x, y
    #   \int_{dD} Pi phi = \int_{dD} phi
    area = 1
    proj = []
    for i in range(n):
        c0, c1, c2 = sp.symbols("c0 c1 c2")
        eqs = []
        for qgrad in ([1, 0], [0, 1]):
            lhs = area * (c1 * qgrad[0] + c2 * qgrad[1])
            rhs = 0
            for e in edges:
                _, _, a, b, length, normal = e
                flux = normal[0] * qgrad[0] + normal[1] * qgrad[1]
                rhs += sp.integrate(trace(i, e) * flux * length, (s, 0, 1))
            eqs.append(sp.Eq(lhs, rhs))
        lhs = 0
        rhs = 0
        for e in edges:
            _, _, a, b, length, _ = e
            px = a + s * (b - a)
            lhs += sp.integrate((c0 + c1 * px[0] + c2 * px[1]) * length, (s, 0, 1))
            rhs += sp.integrate(trace(i, e) * length, (s, 0, 1))
        eqs.append(sp.Eq(lhs, rhs))
        sol = sp.solve(eqs, [c0, c1, c2], dict=True)[0]
        proj.append(sp.simplify(sol[c0] + sol[c1] * x + sol[c2] * y))

    def consistency(i, j):
        gi = [sp.diff(proj[i], x), sp.diff(proj[i], y)]
        gj = [sp.diff(proj[j], x), sp.diff(proj[j], y)]
        return sp.integrate(sp.integrate(gi[0] * gj[0] + gi[1] * gj[1], (x, 0, 1)), (y, 0, 1))

    def residual_trace(i, e):
        _, _, a, b, _, _ = e
        px = a + s * (b - a)
        return trace(i, e) - proj[i].subs({x: px[0], y: px[1]})

    def stabilisation(i, j):
        if stab == "s1":
            total = 0
            for p in range(n):
                px, py = verts[p]
                ri = (1 if p == i else 0) - proj[i].subs({x: px, y: py})
                rj = (1 if p == j else 0) - proj[j].subs({x: px, y: py})
                total += ri * rj
            return total
        total = 0
        for e in edges:
            length = e[4]
            di = sp.diff(residual_trace(i, e), s) / length
            dj = sp.diff(residual_trace(j, e), s) / length
            total += sp.integrate(di * dj * length, (s, 0, 1))
        return hD * total

    K = [[sp.nsimplify(sp.simplify(consistency(i, j) + stabilisation(i, j))) for j in range(n)]
         for i in range(n)]
    return K


def triangle_k2_stiffness():
    xc = sp.Rational(1, 3)
    yc = sp.Rational(1, 3)
    h = sp.sqrt(2)
    exps = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    mons = [((x - xc) / h) ** a * ((y - yc) / h) ** b for a, b in exps]
    G = []
    for ma in mons:
        row = []
        for mb in mons:
            integrand = sp.diff(ma, x) * sp.diff(mb, x) + sp.diff(ma, y) * sp.diff(mb, y)
            row.append(sp.integrate(sp.integrate(integrand, (y, 0, 1 - x)), (x, 0, 1)))
        G.append(row)
    return G


def to_float(matrix):
    return [[float(sp.N(v, 30)) for v in row] for row in matrix]


def main():
    out = {
        "square_k1_s1": to_float(square_k1("s1")),
        "square_k1_s2": to_float(square_k1("s2")),
        "triangle_k2_stiffness": to_float(triangle_k2_stiffness()),
    }
    path = pathlib.Path(__file__).resolve().parent.parent / "fixtures" / "oracle_values.json"
    path.write_text(json.dumps(out, indent=2) + "\n")
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
