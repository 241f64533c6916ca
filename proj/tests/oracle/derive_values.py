"""Independent high-precision values frozen into the unit tests.

Everything here is computed with mpmath from number-basis sums or direct
coherent-state algebra, without reusing the C++ code paths.
Run: python3 tests/oracle/derive_values.py
"""
import mpmath as mp

mp.mp.dps = 40
NMAX = 160


def coh(a, nmax=NMAX):
    a = mp.mpc(a)
    pref = mp.exp(-abs(a) ** 2 / 2)
    out = [pref]
    for n in range(1, nmax + 1):
        out.append(out[-1] * a / mp.sqrt(n))
    return out


def add(*vs):
    return [sum(x) for x in zip(*vs)]


def scale(c, v):
    return [c * x for x in v]


def inner(x, y):
    return mp.fsum(mp.conj(a) * b for a, b in zip(x, y))


def normalize(v):
    n = mp.sqrt(abs(inner(v, v)))
    return [x / n for x in v]


def cat(a, sign=1):
    return normalize(add(coh(a), scale(sign, coh(-a))))


def hermite_fn(nmax, x):
    x = mp.mpf(x)
    psi = [mp.pi ** (-0.25) * mp.exp(-x * x / 2)]
    psi.append(mp.sqrt(2) * x * psi[0])
    for n in range(1, nmax):
        psi.append(mp.sqrt(mp.mpf(2) / (n + 1)) * x * psi[n] - mp.sqrt(mp.mpf(n) / (n + 1)) * psi[n - 1])
    return psi


def pdf(v, x):
    psi = hermite_fn(len(v) - 1, x)
    return abs(mp.fsum(p * c for p, c in zip(psi, v))) ** 2


def moments(v):
    a = mp.fsum(mp.conj(v[n - 1]) * mp.sqrt(n) * v[n] for n in range(1, len(v)))
    a2 = mp.fsum(mp.conj(v[n - 2]) * mp.sqrt(n * (n - 1)) * v[n] for n in range(2, len(v)))
    nn = mp.fsum(n * abs(v[n]) ** 2 for n in range(len(v)))
    return a, a2, nn


def qfi_single(v, u):
    # 4 Var(G), G = i(u a^dag - conj(u) a)
    a, a2, n = moments(v)
    g1 = 1j * (u * mp.conj(a) - mp.conj(u) * a)
    g2 = -(u * u * mp.conj(a2) + mp.conj(u * u) * a2) + 2 * n + 1
    return 4 * (mp.re(g2) - abs(g1) ** 2)


def show(name, v):
    if isinstance(v, mp.mpc):
        print(f"{name} = {mp.nstr(v.real, 20)} {mp.nstr(v.imag, 20)}")
    else:
        print(f"{name} = {mp.nstr(v, 20)}")


a, b = mp.mpc(1, 2), mp.mpc(-0.5, 0.3)
show("overlap(1+2i,-0.5+0.3i)", inner(coh(a), coh(b)))
show("norm2(|1.3>+|-1.3>)", inner(add(coh(1.3), coh(-1.3)), add(coh(1.3), coh(-1.3))).real)

ec, oc = cat(1.5, 1), cat(1.5, -1)
for n in (0, 2, 4):
    show(f"even_cat(1.5).P({n})", abs(ec[n]) ** 2)
show("odd_cat(1.5).P(1)", abs(oc[1]) ** 2)
show("even_cat(1.2).pdf(0.7)", pdf(cat(1.2, 1), 0.7))
show("coherent(0.8+0.5i).pdf(-0.3)", pdf(coh(mp.mpc(0.8, 0.5)), -0.3))

show("qfi(even_cat(1.5), i)", qfi_single(cat(1.5, 1), 1j))
show("qfi(even_cat(1.5), 1)", qfi_single(cat(1.5, 1), 1))
show("qfi(coherent(0.7-0.2i), e^{0.3i})", qfi_single(coh(mp.mpc(0.7, -0.2)), mp.exp(0.3j)))

# unmixed even Bell-cat at 1.2 is an even cat of amplitude sqrt2*1.2 on one port
show("bell_even(1.2).P_FAIL", abs(cat(mp.sqrt(2) * 1.2, 1)[0]) ** 2)


def displaced_parity(alpha, eps):
    # even cat displaced by i eps, number basis: apply D via the matrix exponential of the truncated generator
    N = 120
    A = mp.matrix(N, N)
    for n in range(N - 1):
        A[n, n + 1] = mp.sqrt(n + 1)
    beta = mp.mpc(0, eps)
    G = beta * A.T - mp.conj(beta) * A
    D = mp.expm(G)
    v = cat(alpha, 1)[:N]
    w = [mp.fsum(D[i, j] * v[j] for j in range(N)) for i in range(N)]
    return mp.fsum(abs(w[n]) ** 2 for n in range(0, N, 2))


mp.mp.dps = 30
show("weak_parity(alpha=2,N=1,eps=0.1)", displaced_parity(2, 0.1))
mp.mp.dps = 40


def ruler_fid(alpha, th):
    c = cat(alpha, 1)
    r = [x * mp.exp(1j * th * n) for n, x in enumerate(c)]
    return abs(inner(c, r)) ** 2


half = mp.findroot(lambda t: ruler_fid(4, t) - mp.mpf(1) / 2, 0.2)
show("ruler_fwhm_theta(alpha=4)", 2 * half)
