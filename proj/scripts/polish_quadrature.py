#!/usr/bin/env python3
"""Polish symmetric simplex quadrature rules to 30+ digits with Gauss-Newton
iterations on the moment equations, then print C++ tables.

Orbit conventions (barycentric):
  triangle: S3 (centroid), S21(a) -> 3 pts, S111(a,b) -> 6 pts
  tet:      S4 (centroid), S31(a) -> 4 pts, S22(a) -> 6 pts, S211(a,b) -> 12 pts
Weights are normalized (sum to 1); multiply by reference measure when emitting.
"""
import itertools
from mpmath import mp, mpf, matrix, lu_solve, factorial

mp.dps = 60


def perms_unique(tup):
    return sorted(set(itertools.permutations(tup)))


def tri_orbit(kind, params):
    if kind == "S3":
        return [(mpf(1) / 3, mpf(1) / 3, mpf(1) / 3)]
    if kind == "S21":
        a = params[0]
        return perms_unique((a, a, 1 - 2 * a))
    if kind == "S111":
        a, b = params
        return perms_unique((a, b, 1 - a - b))
    raise ValueError(kind)


def tet_orbit(kind, params):
    if kind == "S4":
        return [(mpf(1) / 4,) * 4]
    if kind == "S31":
        a = params[0]
        return perms_unique((a, a, a, 1 - 3 * a))
    if kind == "S22":
        a = params[0]
        return perms_unique((a, a, mpf(1) / 2 - a, mpf(1) / 2 - a))
    if kind == "S211":
        a, b = params
        return perms_unique((a, a, b, 1 - 2 * a - b))
    raise ValueError(kind)


def exact_moment(powers):
    # \int_simplex prod x_i^{p_i} dx = prod(p_i!) * dim! / (sum p_i + dim)! * 1/dim!...
    # unit tet: p!q!r!/(p+q+r+3)!, unit tri: p!q!/(p+q+2)!
    dim = len(powers)
    num = mpf(1)
    for p in powers:
        num *= factorial(p)
    return num / factorial(sum(powers) + dim)


def monomials(dim, deg):
    out = []
    for d in range(deg + 1):
        for c in itertools.product(range(d + 1), repeat=dim):
            if sum(c) == d:
                out.append(c)
    return out


def rule_points_cart(orbits, dim):
    """orbits: list of (kind, params, weight). Returns [(cart_pt, w)]"""
    pts = []
    for kind, params, w in orbits:
        gen = tri_orbit if dim == 2 else tet_orbit
        for bary in gen(kind, params):
            # cartesian: x_i = bary[i+1]
            pts.append((bary[1:], w))
    return pts


def residuals(orbits, dim, deg):
    pts = rule_points_cart(orbits, dim)
    res = []
    # measure-normalized: weights sum to 1, moments scaled by 1/measure
    meas = exact_moment((0,) * dim)
    for mono in monomials(dim, deg):
        s = mpf(0)
        for cart, w in pts:
            v = w
            for x, p in zip(cart, mono):
                v *= x**p
            s += v
        res.append(s - exact_moment(mono) / meas)
    return res


def pack(orbits):
    x = []
    for kind, params, w in orbits:
        x.extend(params)
        x.append(w)
    return x


def unpack(x, template):
    out = []
    i = 0
    for kind, params, w in template:
        n = len(params)
        out.append((kind, list(x[i:i + n]), x[i + n]))
        i += n + 1
    return out


def gauss_newton(template, dim, deg, iters=60):
    x = [mpf(v) for v in pack(template)]
    n = len(x)
    for it in range(iters):
        orbits = unpack(x, template)
        r = residuals(orbits, dim, deg)
        m = len(r)
        # numerical Jacobian
        J = matrix(m, n)
        h = mpf(10) ** (-30)
        for j in range(n):
            xp = list(x)
            xp[j] += h
            rp = residuals(unpack(xp, template), dim, deg)
            for i in range(m):
                J[i, j] = (rp[i] - r[i]) / h
        # solve normal equations
        JTJ = J.T * J
        JTr = J.T * matrix(r)
        try:
            dx = lu_solve(JTJ, JTr)
        except Exception:
            print("  solve failed")
            break
        for j in range(n):
            x[j] -= dx[j]
        rn = max(abs(v) for v in residuals(unpack(x, template), dim, deg))
        if rn < mpf(10) ** (-45):
            break
    return unpack(x, template), rn


def report(name, template, dim, deg, measure):
    orbits, resid = gauss_newton(template, dim, deg)
    pts = rule_points_cart(orbits, dim)
    wsum = sum(w for _, w in pts)
    allpos = all(w > 0 for _, w in pts)
    inside = all(all(c > 0 for c in cart) and sum(cart) < 1 for cart, _ in pts)
    print(f"// {name}: {len(pts)} pts, degree {deg}, max moment residual {mp.nstr(resid, 3)}")
    print(f"//   weight sum (normalized) = {mp.nstr(wsum, 20)}, positive={allpos}, inside={inside}")
    for kind, params, w in orbits:
        ps = ", ".join(mp.nstr(p, 25) for p in params)
        print(f"//   {kind}({ps}) w_norm={mp.nstr(w, 25)}")
    # emit C++: points in cartesian, weights scaled by measure
    print("static const double pts[][%d] = {" % dim)
    for cart, w in pts:
        coords = ", ".join(mp.nstr(c, 18) for c in cart)
        print(f"  {{{coords}}},")
    print("};")
    print("static const double wts[] = {")
    for cart, w in pts:
        print(f"  {mp.nstr(w * measure, 18)},")
    print("};")
    print()


third = mpf(1) / 3

print("=== TRIANGLE deg 4 (Dunavant 6pt) ===")
report("tri_deg4", [
    ("S21", [mpf("0.445948490915965")], mpf("0.223381589678011")),
    ("S21", [mpf("0.091576213509771")], mpf("0.109951743655322")),
], 2, 4, mpf(1) / 2)

print("=== TRIANGLE deg 6 (Dunavant 12pt) ===")
report("tri_deg6", [
    ("S21", [mpf("0.063089014491502")], mpf("0.050844906370207")),
    ("S21", [mpf("0.249286745170910")], mpf("0.116786275726379")),
    ("S111", [mpf("0.310352451033785"), mpf("0.053145049844816")], mpf("0.082851075618374")),
], 2, 6, mpf(1) / 2)

print("=== TET deg 5 (Keast 14pt) ===")
report("tet_deg5", [
    ("S31", [mpf("0.3108859192633005")], mpf("0.1126879257180162")),
    ("S31", [mpf("0.0927352503108912")], mpf("0.0734930431163619")),
    ("S22", [mpf("0.0455037041256497")], mpf("0.0425460207770812")),
], 3, 5, mpf(1) / 6)

print("=== TET deg 6 (Keast 24pt) ===")
report("tet_deg6", [
    ("S31", [mpf("0.2146028712591517")], mpf("0.0399227502581679")),
    ("S31", [mpf("0.0406739585346113")], mpf("0.0100772110553207")),
    ("S31", [mpf("0.3223378901422757")], mpf("0.0553571815436544")),
    ("S211", [mpf("0.0636610018750175"), mpf("0.6030056647916491")], mpf("0.0482142857142857")),
], 3, 6, mpf(1) / 6)
