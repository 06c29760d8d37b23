"""Independent computer-algebra oracle for frozen values used by the C++ tests.

Run with `python3 tests/oracles/connection_oracle.py`. Every number printed
here is copied verbatim into the corresponding C++ test.
"""
import itertools

import sympy as sp


def christoffel(g, xs):
    d = len(xs)
    gi = g.inv()
    return [[[sp.simplify(sum(gi[k, l] * (sp.diff(g[j, l], xs[i]) + sp.diff(g[i, l], xs[j])
                                          - sp.diff(g[i, j], xs[l])) for l in range(d)) / 2)
              for j in range(d)] for i in range(d)] for k in range(d)]


def connection(g, xs, xi_up, S):
    """C[k][i][j]: nabla_{d_i} d_j = C^k_ij d_k for nabla = LC + X^xi + S/2."""
    d = len(xs)
    gam = christoffel(g, xs)
    gi = g.inv()
    xi_low = [sum(g[l, m] * xi_up[m] for m in range(d)) for l in range(d)]
    A_low = [[[g[i, j] * xi_low[l] - xi_low[j] * g[i, l] + S[i][j][l] / 2 for l in range(d)]
              for j in range(d)] for i in range(d)]
    return [[[gam[k][i][j] + sum(gi[k, l] * A_low[i][j][l] for l in range(d))
              for j in range(d)] for i in range(d)] for k in range(d)]


def riemann_low(C, g, xs):
    """R_ijkl = g(R(d_i,d_j)d_k, d_l)."""
    d = len(xs)
    R = {}
    for i, j, k in itertools.product(range(d), repeat=3):
        up = [sp.diff(C[l][j][k], xs[i]) - sp.diff(C[l][i][k], xs[j])
              + sum(C[l][i][m] * C[m][j][k] - C[l][j][m] * C[m][i][k] for m in range(d))
              for l in range(d)]
        for l in range(d):
            R[i, j, k, l] = sp.simplify(sum(g[l, m] * up[m] for m in range(d)))
    return R


def de_sitter():
    t, y1, y2, y3 = sp.symbols('t y1 y2 y3')
    xs = [t, y1, y2, y3]
    g = sp.diag(-1, sp.exp(-2 * t), sp.exp(-2 * t), sp.exp(-2 * t))
    gam = christoffel(g, xs)
    print('de Sitter Gamma^t_{y1 y1}(t=0) =', gam[0][1][1].subs(t, 0))
    print('de Sitter Gamma^y1_{t y1}(t=0) =', gam[1][0][1].subs(t, 0))
    zero = [[[0] * 4 for _ in range(4)] for _ in range(4)]
    R = riemann_low(connection(g, xs, [0] * 4, zero), g, xs)
    # R_ijkl = K (g_ik g_jl - g_il g_jk)
    K = sp.simplify(R[0, 1, 0, 1] / (g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]))
    print('de Sitter constant K =', K)
    for (i, j, k, l), val in R.items():
        assert sp.simplify(val - K * (g[i, k] * g[j, l] - g[i, l] * g[j, k])) == 0


def warped_2d():
    t, y = sp.symbols('t y')
    g = sp.diag(-1, sp.exp(-2 * t))
    gam = christoffel(g, [t, y])
    print('warped 2D eps=-1 Gamma^y_{ty}(t=0.3) =', sp.N(gam[1][0][1].subs(t, sp.Rational(3, 10)), 17))


def kundt_sign():
    v, x, u, a = sp.symbols('v x u a')
    C = sp.Function('C')(x, u)
    xs = [v, x, u]
    g = sp.Matrix([[0, 0, 1], [0, 1, a * v], [1, a * v, -2 * v * sp.exp(-a * x) + C]])
    assert sp.simplify(g.det()) == -1
    p = [sp.exp(-a * x), 0, 0]
    for sign in (1, -1):
        S = [[[0] * 3 for _ in range(3)] for _ in range(3)]
        for perm in itertools.permutations(range(3)):
            S[perm[0]][perm[1]][perm[2]] = sign * a * sp.combinatorics.Permutation(list(perm)).signature()
        Cc = connection(g, xs, p, S)
        nab = [[sp.simplify(sp.diff(p[k], xs[i]) + sum(Cc[k][i][j] * p[j] for j in range(3)))
                for k in range(3)] for i in range(3)]
        ok = all(e == 0 for row in nab for e in row)
        print(f'Kundt: S_vxu = {sign}*a gives nabla p = 0: {ok}')


def torsion_norm_3d():
    # S = a Vol on Minkowski_3 diag(-1,1,1); ||S||^2 = 1/6 S_ijk S^ijk
    a = sp.symbols('a')
    gi = sp.diag(-1, 1, 1)
    tot = 0
    for i, j, k in itertools.permutations(range(3)):
        sig = sp.combinatorics.Permutation([i, j, k]).signature()
        tot += (a * sig) ** 2 * gi[i, i] * gi[j, j] * gi[k, k]
    print('||a Vol||^2 on Minkowski_3 =', sp.simplify(tot / 6))


def sigma_e123_e145():
    d = 5
    tau = {}
    for base, c in (((0, 1, 2), 1), ((0, 3, 4), 1)):
        for perm in itertools.permutations(range(3)):
            idx = tuple(base[q] for q in perm)
            tau[idx] = c * sp.combinatorics.Permutation(list(perm)).signature()
    T = lambda i, j, k: tau.get((i, j, k), 0)
    sig = {}
    for X, Y, Z, V in itertools.combinations(range(d), 4):
        s = 0
        for A, B, C in ((X, Y, Z), (Y, Z, X), (Z, X, Y)):
            s += sum(T(A, B, m) * T(m, C, V) for m in range(d))
        if s != 0:
            sig[X, Y, Z, V] = s
    print('sigma(e123+e145) nonzero increasing components (0-based):', sig)


def form_action_e12_on_e13():
    # Lambda = e1^e2 acting by (X^Y)Z = g(X,Z)Y - g(Y,Z)X on Euclidean R^3.
    d = 3
    L = sp.zeros(d, d)
    for k in range(d):
        e = sp.zeros(d, 1)
        e[k] = 1
        col = e[0] * sp.Matrix([0, 1, 0]) - e[1] * sp.Matrix([1, 0, 0])
        L[:, k] = col
    w = sp.zeros(d, d)
    w[0, 2], w[2, 0] = 1, -1
    res = sp.zeros(d, d)
    for i in range(d):
        for j in range(d):
            res[i, j] = -sum(w[s, j] * L[s, i] + w[i, s] * L[s, j] for s in range(d))
    print('(e1^e2).(e^1^e^3) components:', res)


if __name__ == '__main__':
    de_sitter()
    warped_2d()
    kundt_sign()
    torsion_norm_3d()
    sigma_e123_e145()
    form_action_e12_on_e13()
