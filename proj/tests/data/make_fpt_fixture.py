"""Reference values of phi1/phi2 at 60-digit precision."""
import mpmath as mp

mp.mp.dps = 60


def series(z, weighted):
    s = mp.mpf(0)
    x = mp.sqrt(2) * z
    k = 1
    while True:
        t = x**k / mp.factorial(k) * mp.gamma(mp.mpf(k) / 2)
        if weighted:
            t *= mp.digamma(mp.mpf(k) / 2) - mp.digamma(1)
        s += t
        if k > 20 and abs(t) < mp.mpf(10) ** -50 * max(abs(s), 1):
            return s / 2
        k += 1


zs = [-8, -6, -4, -3, -2.5, -2, -1.5, -1, -0.5, -0.1, 0, 0.1, 0.5, 1, 1.5, 2, 3, 4, 6, 8]
print("z,phi1,phi2")
for z in zs:
    z = mp.mpf(z)
    print(f"{mp.nstr(z, 17)},{mp.nstr(series(z, False), 25)},{mp.nstr(series(z, True), 25)}")
