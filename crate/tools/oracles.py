"""Independent high-precision reference values (mpmath) frozen into the Rust tests.

Run: python3 tools/oracles.py
"""
import mpmath as mp

mp.mp.dps = 30


def log_zeta_branch(sigma, t, top=60, steps=4000):
    """log zeta(sigma + it) continued from Re s = top along the horizontal ray."""
    prev = mp.log(mp.zeta(mp.mpc(top, t)))
    for i in range(1, steps + 1):
        a = top - (top - sigma) * i / steps
        cur = mp.log(mp.zeta(mp.mpc(a, t)))
        k = mp.nint((prev.imag - cur.imag) / (2 * mp.pi))
        cur += 2j * mp.pi * k
        prev = cur
    return prev


def branch_is_principal(sigma, t, top=60, steps=400):
    for i in range(steps + 1):
        a = top - (top - sigma) * i / steps
        v = mp.log(mp.zeta(mp.mpc(a, t)))
        if abs(v.imag) > 3.0:
            return False
    return True


def h_m(m, sigma, t):
    assert branch_is_principal(sigma, t), (sigma, t)
    f = lambda a: (a - sigma) ** (m - 1) * mp.log(mp.zeta(mp.mpc(a, t)))
    return mp.quad(f, [sigma, sigma + 0.5, 2, 5, 20, 80]) / mp.factorial(m - 1)


def second_moment(m, sigma):
    total = mp.mpf(0)
    for k in range(1, 80):
        a = 2 * k * sigma
        if m == 0:
            term = mp.primezeta(a)
        else:
            term = mp.quad(lambda v: (v - a) ** (2 * m - 1) * mp.primezeta(v), [a, a + 2, a + 10, mp.inf]) / mp.factorial(2 * m - 1)
        total += term / k ** (2 * m + 2)
    return total


def chi4_l(s):
    return (mp.zeta(s, 0.25) - mp.zeta(s, 0.75)) / mp.power(4, s)


if __name__ == "__main__":
    print("log zeta:")
    for s in [(0.8, 5.0), (0.75, 100.0), (0.9, 1000.0), (1.2, 3.0), (0.6, 20.0)]:
        v = log_zeta_branch(*s)
        print(s, mp.nstr(v.real, 17), mp.nstr(v.imag, 17))
    print("H_1, H_2:")
    for m in (1, 2):
        for s in [(0.8, 5.0), (0.75, 100.0), (2.0, 10.0)]:
            v = h_m(m, *s)
            print(m, s, mp.nstr(v.real, 17), mp.nstr(v.imag, 17))
    print("log L(chi_4):")
    for s in [(0.8, 50.0)]:
        v = mp.log(chi4_l(mp.mpc(*s)))
        print(s, mp.nstr(v.real, 17), mp.nstr(v.imag, 17))
    print("second moments:")
    for m in (0, 1):
        for sigma in (0.75, 0.8, 0.9):
            print(m, sigma, mp.nstr(second_moment(m, sigma), 17))
