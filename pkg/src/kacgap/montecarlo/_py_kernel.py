"""Interpreted jump-chain kernel.

Reference implementation for the compiled kernel: every floating-point
expression here is written in the exact order the C version uses, so the
two backends produce bit-identical streams.  State is nine scalars (three
velocity vectors in R^3); no numpy inside the jump loop.
"""

import math

MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_SQ2 = math.sqrt(2.0)
_EQ_CONST = 16.0 / math.pi  # equilibrium radial density prefactor

REJECTION_CAP = 1_000_000


def _mix64(z: int) -> int:
    # splitmix64 finalizer
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


class Xoshiro:
    """xoshiro256++ with a splitmix64-expanded (seed, stream) key.

    Stream r is the replica index; distinct streams give independent
    sequences, so chunked and serial runs agree.
    """

    __slots__ = ("s0", "s1", "s2", "s3")

    def __init__(self, seed: int, stream: int = 0):
        z = (seed & MASK) ^ _mix64(stream & MASK)
        s = []
        for _ in range(4):
            z = (z + _GOLDEN) & MASK
            s.append(_mix64(z))
        if not any(s):
            s[0] = _GOLDEN
        self.s0, self.s1, self.s2, self.s3 = s

    def next64(self) -> int:
        s0, s1, s2, s3 = self.s0, self.s1, self.s2, self.s3
        t = (s0 + s3) & MASK
        result = ((((t << 23) | (t >> 41)) & MASK) + s0) & MASK
        tt = (s1 << 17) & MASK
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= tt
        s3 = ((s3 << 45) | (s3 >> 19)) & MASK
        self.s0, self.s1, self.s2, self.s3 = s0, s1, s2, s3
        return result

    def uniform(self) -> float:
        # 53-bit mantissa in [0, 1)
        return (self.next64() >> 11) * 2.0**-53


def gauss_pair(rng) -> tuple[float, float]:
    """Two independent standard normals (Marsaglia polar)."""
    while True:
        a = 2.0 * rng.uniform() - 1.0
        b = 2.0 * rng.uniform() - 1.0
        s = a * a + b * b
        if 0.0 < s < 1.0:
            m = math.sqrt(-2.0 * math.log(s) / s)
            return a * m, b * m


def unit3(rng) -> tuple[float, float, float]:
    """Uniform direction on the unit sphere (normalized Gaussian triple)."""
    g1, g2 = gauss_pair(rng)
    g3, _ = gauss_pair(rng)
    nrm = math.sqrt(g1 * g1 + g2 * g2 + g3 * g3)
    return g1 / nrm, g2 / nrm, g3 / nrm


def sample_radius(rng, init_kind: int) -> float:
    """Radius in [0,1] by rejection: 0 -> density 2(1-x), 1 -> equilibrium."""
    for _ in range(REJECTION_CAP):
        r = rng.uniform()
        u = rng.uniform()
        if init_kind == 0:
            if u <= 1.0 - r:
                return r
        else:
            # envelope 2 >= max of the equilibrium density (~1.9603)
            if 2.0 * u <= _EQ_CONST * r * r * math.sqrt(1.0 - r * r):
                return r
    raise RuntimeError("rejection sampler exceeded its attempt cap")


def init_state(rng, init_kind: int) -> list:
    """Initial nine-scalar state: v1 = sqrt(2) v with |v| drawn from the
    configured density, v2/v3 = +-beta y - v/sqrt(2) on the constraint
    sphere."""
    r = sample_radius(rng, init_kind)
    dx, dy, dz = unit3(rng)
    vx, vy, vz = r * dx, r * dy, r * dz
    yx, yy, yz = unit3(rng)
    bb = 1.5 * (1.0 - (vx * vx + vy * vy + vz * vz))
    beta = math.sqrt(bb) if bb > 0.0 else 0.0
    return [
        _SQ2 * vx, _SQ2 * vy, _SQ2 * vz,
        beta * yx - vx / _SQ2, beta * yy - vy / _SQ2, beta * yz - vz / _SQ2,
        -beta * yx - vx / _SQ2, -beta * yy - vy / _SQ2, -beta * yz - vz / _SQ2,
    ]


def single_jump(v: list, alpha: int, rng) -> tuple[float, int, float]:
    """One jump of the chain, in place.

    Returns (waiting time, fixed particle index, invariant residual after
    the jump).  Residuals beyond 1e-12 trigger re-projection onto the
    constraint sphere; the parametrization is exact in real arithmetic,
    so this only ever cleans float rounding.
    """
    best = math.inf
    kbest = 0
    for k in range(3):
        u = rng.uniform()
        if alpha == 0:
            lam = 1.0 / 3.0
        else:
            o = 3 * k
            lam = (2.0 - (v[o] * v[o] + v[o + 1] * v[o + 1] + v[o + 2] * v[o + 2])) / 4.0
        dt = -math.log(1.0 - u) / lam if lam > 0.0 else math.inf
        if dt < best:
            best = dt
            kbest = k
    o = 3 * kbest
    wx, wy, wz = v[o] / _SQ2, v[o + 1] / _SQ2, v[o + 2] / _SQ2
    yx, yy, yz = unit3(rng)
    bb = 1.5 * (1.0 - (wx * wx + wy * wy + wz * wz))
    beta = math.sqrt(bb) if bb > 0.0 else 0.0
    o1 = 3 * ((kbest + 1) % 3)
    o2 = 3 * ((kbest + 2) % 3)
    v[o], v[o + 1], v[o + 2] = _SQ2 * wx, _SQ2 * wy, _SQ2 * wz
    v[o1] = beta * yx - wx / _SQ2
    v[o1 + 1] = beta * yy - wy / _SQ2
    v[o1 + 2] = beta * yz - wz / _SQ2
    v[o2] = -beta * yx - wx / _SQ2
    v[o2 + 1] = -beta * yy - wy / _SQ2
    v[o2 + 2] = -beta * yz - wz / _SQ2
    mx = v[0] + v[3] + v[6]
    my = v[1] + v[4] + v[7]
    mz = v[2] + v[5] + v[8]
    en = (
        v[0] * v[0] + v[1] * v[1] + v[2] * v[2]
        + v[3] * v[3] + v[4] * v[4] + v[5] * v[5]
        + v[6] * v[6] + v[7] * v[7] + v[8] * v[8]
    )
    res = abs(mx)
    if abs(my) > res:
        res = abs(my)
    if abs(mz) > res:
        res = abs(mz)
    if abs(en - 3.0) > res:
        res = abs(en - 3.0)
    if res > 1e-12:
        cx, cy, cz = mx / 3.0, my / 3.0, mz / 3.0
        for k in range(3):
            o = 3 * k
            v[o] -= cx
            v[o + 1] -= cy
            v[o + 2] -= cz
        en = (
            v[0] * v[0] + v[1] * v[1] + v[2] * v[2]
            + v[3] * v[3] + v[4] * v[4] + v[5] * v[5]
            + v[6] * v[6] + v[7] * v[7] + v[8] * v[8]
        )
        scale = math.sqrt(3.0 / en)
        for k in range(9):
            v[k] *= scale
    return best, kbest, res


def run_chunk(seed, rep_lo, rep_hi, alpha, frames, init_kind, out) -> float:
    """Evolve replicas [rep_lo, rep_hi), filling out[rep - rep_lo, f, k]
    with the rescaled radii |v_k|/sqrt(2) at each frame time (state after
    the first jump past the frame).  Returns the worst invariant residual
    seen."""
    n_frames = len(frames)
    maxres = 0.0
    for rep in range(rep_lo, rep_hi):
        rng = Xoshiro(seed, rep)
        v = init_state(rng, init_kind)
        t = 0.0
        row = rep - rep_lo
        for fi in range(n_frames):
            T = frames[fi]
            while t < T:
                dt, _, res = single_jump(v, alpha, rng)
                t += dt
                if res > maxres:
                    maxres = res
            for k in range(3):
                o = 3 * k
                out[row, fi, k] = (
                    math.sqrt(v[o] * v[o] + v[o + 1] * v[o + 1] + v[o + 2] * v[o + 2])
                    / _SQ2
                )
    return maxres
