# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled jump-chain kernel.

Mirrors _py_kernel expression by expression (same operation order, same
rounding; compiled with FP contraction off) so both backends emit
bit-identical streams.
"""

from libc.math cimport INFINITY, log, sqrt
from libc.stdint cimport uint64_t

cdef double SQ2 = sqrt(2.0)
cdef double EQ_CONST = 16.0 / 3.14159265358979323846
cdef double INV_2_53 = 1.0 / 9007199254740992.0
cdef uint64_t GOLDEN = <uint64_t>0x9E3779B97F4A7C15
cdef long REJECTION_CAP = 1000000

_PY_MASK = (1 << 64) - 1


cdef struct Rng:
    uint64_t s0
    uint64_t s1
    uint64_t s2
    uint64_t s3


cdef inline uint64_t _mix64(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline void _seed(Rng* rng, uint64_t seed, uint64_t stream) nogil:
    cdef uint64_t z = seed ^ _mix64(stream)
    cdef uint64_t s0, s1, s2, s3
    z = z + GOLDEN
    s0 = _mix64(z)
    z = z + GOLDEN
    s1 = _mix64(z)
    z = z + GOLDEN
    s2 = _mix64(z)
    z = z + GOLDEN
    s3 = _mix64(z)
    if s0 == 0 and s1 == 0 and s2 == 0 and s3 == 0:
        s0 = GOLDEN
    rng.s0 = s0
    rng.s1 = s1
    rng.s2 = s2
    rng.s3 = s3


cdef inline uint64_t _rotl(uint64_t x, int k) nogil:
    return (x << k) | (x >> (64 - k))


cdef inline uint64_t _next64(Rng* rng) nogil:
    cdef uint64_t s0 = rng.s0
    cdef uint64_t s1 = rng.s1
    cdef uint64_t s2 = rng.s2
    cdef uint64_t s3 = rng.s3
    cdef uint64_t t = s0 + s3
    cdef uint64_t result = _rotl(t, 23) + s0
    cdef uint64_t tt = s1 << 17
    s2 = s2 ^ s0
    s3 = s3 ^ s1
    s1 = s1 ^ s2
    s0 = s0 ^ s3
    s2 = s2 ^ tt
    s3 = _rotl(s3, 45)
    rng.s0 = s0
    rng.s1 = s1
    rng.s2 = s2
    rng.s3 = s3
    return result


cdef inline double _uniform(Rng* rng) nogil:
    return <double>(_next64(rng) >> 11) * INV_2_53


cdef inline void _gauss_pair(Rng* rng, double* g1, double* g2) nogil:
    cdef double a, b, s, m
    while True:
        a = 2.0 * _uniform(rng) - 1.0
        b = 2.0 * _uniform(rng) - 1.0
        s = a * a + b * b
        if 0.0 < s < 1.0:
            m = sqrt(-2.0 * log(s) / s)
            g1[0] = a * m
            g2[0] = b * m
            return


cdef inline void _unit3(Rng* rng, double* x, double* y, double* z) nogil:
    cdef double g1, g2, g3, g4, nrm
    _gauss_pair(rng, &g1, &g2)
    _gauss_pair(rng, &g3, &g4)
    nrm = sqrt(g1 * g1 + g2 * g2 + g3 * g3)
    x[0] = g1 / nrm
    y[0] = g2 / nrm
    z[0] = g3 / nrm


cdef inline int _sample_radius(Rng* rng, int init_kind, double* r_out) nogil:
    cdef double r, u
    cdef long i
    for i in range(REJECTION_CAP):
        r = _uniform(rng)
        u = _uniform(rng)
        if init_kind == 0:
            if u <= 1.0 - r:
                r_out[0] = r
                return 0
        else:
            if 2.0 * u <= EQ_CONST * r * r * sqrt(1.0 - r * r):
                r_out[0] = r
                return 0
    return 1


cdef inline int _init_state(Rng* rng, int init_kind, double* v) nogil:
    cdef double r, dx, dy, dz, vx, vy, vz, yx, yy, yz, bb, beta
    if _sample_radius(rng, init_kind, &r):
        return 1
    _unit3(rng, &dx, &dy, &dz)
    vx = r * dx
    vy = r * dy
    vz = r * dz
    _unit3(rng, &yx, &yy, &yz)
    bb = 1.5 * (1.0 - (vx * vx + vy * vy + vz * vz))
    if bb > 0.0:
        beta = sqrt(bb)
    else:
        beta = 0.0
    v[0] = SQ2 * vx
    v[1] = SQ2 * vy
    v[2] = SQ2 * vz
    v[3] = beta * yx - vx / SQ2
    v[4] = beta * yy - vy / SQ2
    v[5] = beta * yz - vz / SQ2
    v[6] = -beta * yx - vx / SQ2
    v[7] = -beta * yy - vy / SQ2
    v[8] = -beta * yz - vz / SQ2
    return 0


cdef inline double _single_jump(double* v, int alpha, Rng* rng, double* res_out) nogil:
    cdef double best = INFINITY
    cdef int kbest = 0
    cdef int k, o, o1, o2
    cdef double u, lam, dt, wx, wy, wz, yx, yy, yz, bb, beta
    cdef double mx, my, mz, en, res, cx, cy, cz, scale
    for k in range(3):
        u = _uniform(rng)
        if alpha == 0:
            lam = 1.0 / 3.0
        else:
            o = 3 * k
            lam = (2.0 - (v[o] * v[o] + v[o + 1] * v[o + 1] + v[o + 2] * v[o + 2])) / 4.0
        if lam > 0.0:
            dt = -log(1.0 - u) / lam
        else:
            dt = INFINITY
        if dt < best:
            best = dt
            kbest = k
    o = 3 * kbest
    wx = v[o] / SQ2
    wy = v[o + 1] / SQ2
    wz = v[o + 2] / SQ2
    _unit3(rng, &yx, &yy, &yz)
    bb = 1.5 * (1.0 - (wx * wx + wy * wy + wz * wz))
    if bb > 0.0:
        beta = sqrt(bb)
    else:
        beta = 0.0
    o1 = 3 * ((kbest + 1) % 3)
    o2 = 3 * ((kbest + 2) % 3)
    v[o] = SQ2 * wx
    v[o + 1] = SQ2 * wy
    v[o + 2] = SQ2 * wz
    v[o1] = beta * yx - wx / SQ2
    v[o1 + 1] = beta * yy - wy / SQ2
    v[o1 + 2] = beta * yz - wz / SQ2
    v[o2] = -beta * yx - wx / SQ2
    v[o2 + 1] = -beta * yy - wy / SQ2
    v[o2 + 2] = -beta * yz - wz / SQ2
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
        cx = mx / 3.0
        cy = my / 3.0
        cz = mz / 3.0
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
        scale = sqrt(3.0 / en)
        for k in range(9):
            v[k] *= scale
    res_out[0] = res
    return best


def run_chunk(seed, long rep_lo, long rep_hi, int alpha,
              double[::1] frames, int init_kind, double[:, :, ::1] out):
    """Evolve replicas [rep_lo, rep_hi); same contract as the interpreted
    kernel's run_chunk."""
    cdef uint64_t cseed = <uint64_t>(seed & _PY_MASK)
    cdef Py_ssize_t n_frames = frames.shape[0]
    cdef double maxres = 0.0
    cdef int err = 0
    cdef Rng rng
    cdef double v[9]
    cdef double t, T, dt, res
    cdef long rep
    cdef Py_ssize_t row, fi
    cdef int k, o
    with nogil:
        for rep in range(rep_lo, rep_hi):
            _seed(&rng, cseed, <uint64_t>rep)
            if _init_state(&rng, init_kind, v):
                err = 1
                break
            t = 0.0
            row = rep - rep_lo
            for fi in range(n_frames):
                T = frames[fi]
                while t < T:
                    dt = _single_jump(v, alpha, &rng, &res)
                    t += dt
                    if res > maxres:
                        maxres = res
                for k in range(3):
                    o = 3 * k
                    out[row, fi, k] = (
                        sqrt(v[o] * v[o] + v[o + 1] * v[o + 1] + v[o + 2] * v[o + 2])
                        / SQ2
                    )
    if err:
        raise RuntimeError("rejection sampler exceeded its attempt cap")
    return maxres
