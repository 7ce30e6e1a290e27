# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled physics kernels.

Line-for-line mirror of kernels_py.py: the same expressions in the same
order, so that (with -ffp-contract=off) both backends produce bit-identical
trajectories. Any change here must land in kernels_py.py too.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport atan2, sqrt

BACKEND_NAME = "compiled"

cdef double BLOWUP_LIMIT = 1e3


cdef inline void _tri_membrane(
    double[:, ::1] pos, double[:, ::1] f,
    int i, int j, int k,
    double a, double b, double c, double d,
    double area, double lam, double mu, double thickness,
) noexcept nogil:
    cdef double d1x = pos[j, 0] - pos[i, 0]
    cdef double d1y = pos[j, 1] - pos[i, 1]
    cdef double d1z = pos[j, 2] - pos[i, 2]
    cdef double d2x = pos[k, 0] - pos[i, 0]
    cdef double d2y = pos[k, 1] - pos[i, 1]
    cdef double d2z = pos[k, 2] - pos[i, 2]
    cdef double f1x = d1x * a + d2x * c
    cdef double f1y = d1y * a + d2y * c
    cdef double f1z = d1z * a + d2z * c
    cdef double f2x = d1x * b + d2x * d
    cdef double f2y = d1y * b + d2y * d
    cdef double f2z = d1z * b + d2z * d
    cdef double e11 = 0.5 * (f1x * f1x + f1y * f1y + f1z * f1z - 1.0)
    cdef double e22 = 0.5 * (f2x * f2x + f2y * f2y + f2z * f2z - 1.0)
    cdef double e12 = 0.5 * (f1x * f2x + f1y * f2y + f1z * f2z)
    cdef double tr = e11 + e22
    cdef double s11 = lam * tr + 2.0 * mu * e11
    cdef double s22 = lam * tr + 2.0 * mu * e22
    cdef double s12 = 2.0 * mu * e12
    cdef double p1x = f1x * s11 + f2x * s12
    cdef double p1y = f1y * s11 + f2y * s12
    cdef double p1z = f1z * s11 + f2z * s12
    cdef double p2x = f1x * s12 + f2x * s22
    cdef double p2y = f1y * s12 + f2y * s22
    cdef double p2z = f1z * s12 + f2z * s22
    cdef double coeff = -area * thickness
    cdef double gjx = coeff * (p1x * a + p2x * b)
    cdef double gjy = coeff * (p1y * a + p2y * b)
    cdef double gjz = coeff * (p1z * a + p2z * b)
    cdef double gkx = coeff * (p1x * c + p2x * d)
    cdef double gky = coeff * (p1y * c + p2y * d)
    cdef double gkz = coeff * (p1z * c + p2z * d)
    f[j, 0] += gjx
    f[j, 1] += gjy
    f[j, 2] += gjz
    f[k, 0] += gkx
    f[k, 1] += gky
    f[k, 2] += gkz
    f[i, 0] -= gjx + gkx
    f[i, 1] -= gjy + gky
    f[i, 2] -= gjz + gkz


cdef void _accum_membranes(
    double[:, ::1] pos, double[:, ::1] f,
    int[:, ::1] tri, double[:, ::1] dm_inv, double[::1] rest_area,
    double lam, double mu, double thickness,
) noexcept nogil:
    cdef Py_ssize_t t
    for t in range(tri.shape[0]):
        _tri_membrane(
            pos, f,
            tri[t, 0], tri[t, 1], tri[t, 2],
            dm_inv[t, 0], dm_inv[t, 1], dm_inv[t, 2], dm_inv[t, 3],
            rest_area[t], lam, mu, thickness,
        )


cdef void _accum_hinges(
    double[:, ::1] pos, double[:, ::1] f,
    int[:, ::1] hinge, double[::1] hinge_rest, double k_bend,
) noexcept nogil:
    cdef Py_ssize_t h
    cdef int i0, i1, i2, i3
    cdef double ex, ey, ez, ax, ay, az, bx, by, bz
    cdef double nax, nay, naz, nbx, nby, nbz
    cdef double la2, lb2, le2, le, cx, cy, cz, s, c, theta, tau
    cdef double ga, gb, d21, d31, d20, d30, c0a, c0b, c1a, c1b
    if k_bend == 0.0:
        return
    for h in range(hinge.shape[0]):
        i0 = hinge[h, 0]
        i1 = hinge[h, 1]
        i2 = hinge[h, 2]
        i3 = hinge[h, 3]
        ex = pos[i1, 0] - pos[i0, 0]
        ey = pos[i1, 1] - pos[i0, 1]
        ez = pos[i1, 2] - pos[i0, 2]
        ax = pos[i2, 0] - pos[i0, 0]
        ay = pos[i2, 1] - pos[i0, 1]
        az = pos[i2, 2] - pos[i0, 2]
        bx = pos[i3, 0] - pos[i0, 0]
        by = pos[i3, 1] - pos[i0, 1]
        bz = pos[i3, 2] - pos[i0, 2]
        nax = ey * az - ez * ay
        nay = ez * ax - ex * az
        naz = ex * ay - ey * ax
        nbx = by * ez - bz * ey
        nby = bz * ex - bx * ez
        nbz = bx * ey - by * ex
        la2 = nax * nax + nay * nay + naz * naz
        lb2 = nbx * nbx + nby * nby + nbz * nbz
        le2 = ex * ex + ey * ey + ez * ez
        if la2 < 1e-24 or lb2 < 1e-24 or le2 < 1e-24:
            continue
        le = sqrt(le2)
        cx = nay * nbz - naz * nby
        cy = naz * nbx - nax * nbz
        cz = nax * nby - nay * nbx
        s = (cx * ex + cy * ey + cz * ez) / le
        c = nax * nbx + nay * nby + naz * nbz
        theta = atan2(s, c)
        tau = -k_bend * (theta - hinge_rest[h])
        ga = -le / la2
        gb = -le / lb2
        d21 = (pos[i2, 0] - pos[i1, 0]) * ex + (pos[i2, 1] - pos[i1, 1]) * ey + (pos[i2, 2] - pos[i1, 2]) * ez
        d31 = (pos[i3, 0] - pos[i1, 0]) * ex + (pos[i3, 1] - pos[i1, 1]) * ey + (pos[i3, 2] - pos[i1, 2]) * ez
        d20 = ax * ex + ay * ey + az * ez
        d30 = bx * ex + by * ey + bz * ez
        c0a = -d21 / (le * la2)
        c0b = -d31 / (le * lb2)
        c1a = d20 / (le * la2)
        c1b = d30 / (le * lb2)
        f[i2, 0] += tau * (ga * nax)
        f[i2, 1] += tau * (ga * nay)
        f[i2, 2] += tau * (ga * naz)
        f[i3, 0] += tau * (gb * nbx)
        f[i3, 1] += tau * (gb * nby)
        f[i3, 2] += tau * (gb * nbz)
        f[i0, 0] += tau * (c0a * nax + c0b * nbx)
        f[i0, 1] += tau * (c0a * nay + c0b * nby)
        f[i0, 2] += tau * (c0a * naz + c0b * nbz)
        f[i1, 0] += tau * (c1a * nax + c1b * nbx)
        f[i1, 1] += tau * (c1a * nay + c1b * nby)
        f[i1, 2] += tau * (c1a * naz + c1b * nbz)


cdef int _accum_ground_keypoints(
    double[:, ::1] pos, double[:, ::1] vel, double[:, ::1] f,
    double[::1] mass, Py_ssize_t n,
    double kn, double dn, double mu_f, double dt,
) noexcept nogil:
    cdef int any_contact = 0
    cdef Py_ssize_t i
    cdef double phi, dn_cap, dn_eff, fn, vtx, vty, vt, fmax, fstop, ft
    for i in range(n):
        phi = -pos[i, 2]
        if phi <= 0.0:
            continue
        any_contact = 1
        dn_cap = mass[i] / (2.0 * dt)
        dn_eff = dn if dn < dn_cap else dn_cap
        fn = kn * phi - dn_eff * vel[i, 2]
        if fn < 0.0:
            fn = 0.0
        f[i, 2] += fn
        vtx = vel[i, 0]
        vty = vel[i, 1]
        vt = sqrt(vtx * vtx + vty * vty)
        if vt > 1e-12:
            fmax = mu_f * fn
            fstop = mass[i] * vt / dt
            ft = fmax if fmax < fstop else fstop
            f[i, 0] -= ft * vtx / vt
            f[i, 1] -= ft * vty / vt
    return any_contact


cdef inline void _closest_pt(
    double px, double py, double pz,
    double ax, double ay, double az,
    double bx, double by, double bz,
    double cx, double cy, double cz,
    double* out,
) noexcept nogil:
    cdef double abx = bx - ax
    cdef double aby = by - ay
    cdef double abz = bz - az
    cdef double acx = cx - ax
    cdef double acy = cy - ay
    cdef double acz = cz - az
    cdef double apx = px - ax
    cdef double apy = py - ay
    cdef double apz = pz - az
    cdef double d1 = abx * apx + aby * apy + abz * apz
    cdef double d2 = acx * apx + acy * apy + acz * apz
    cdef double bpx, bpy, bpz, d3, d4, vc, t
    cdef double cpx, cpy, cpz, d5, d6, vb, va, denom, v, w
    if d1 <= 0.0 and d2 <= 0.0:
        out[0] = ax; out[1] = ay; out[2] = az
        out[3] = 1.0; out[4] = 0.0; out[5] = 0.0
        return
    bpx = px - bx
    bpy = py - by
    bpz = pz - bz
    d3 = abx * bpx + aby * bpy + abz * bpz
    d4 = acx * bpx + acy * bpy + acz * bpz
    if d3 >= 0.0 and d4 <= d3:
        out[0] = bx; out[1] = by; out[2] = bz
        out[3] = 0.0; out[4] = 1.0; out[5] = 0.0
        return
    vc = d1 * d4 - d3 * d2
    if vc <= 0.0 and d1 >= 0.0 and d3 <= 0.0:
        t = d1 / (d1 - d3)
        out[0] = ax + t * abx; out[1] = ay + t * aby; out[2] = az + t * abz
        out[3] = 1.0 - t; out[4] = t; out[5] = 0.0
        return
    cpx = px - cx
    cpy = py - cy
    cpz = pz - cz
    d5 = abx * cpx + aby * cpy + abz * cpz
    d6 = acx * cpx + acy * cpy + acz * cpz
    if d6 >= 0.0 and d5 <= d6:
        out[0] = cx; out[1] = cy; out[2] = cz
        out[3] = 0.0; out[4] = 0.0; out[5] = 1.0
        return
    vb = d5 * d2 - d1 * d6
    if vb <= 0.0 and d2 >= 0.0 and d6 <= 0.0:
        t = d2 / (d2 - d6)
        out[0] = ax + t * acx; out[1] = ay + t * acy; out[2] = az + t * acz
        out[3] = 1.0 - t; out[4] = 0.0; out[5] = t
        return
    va = d3 * d6 - d5 * d4
    if va <= 0.0 and (d4 - d3) >= 0.0 and (d5 - d6) >= 0.0:
        t = (d4 - d3) / ((d4 - d3) + (d5 - d6))
        out[0] = bx + t * (cx - bx)
        out[1] = by + t * (cy - by)
        out[2] = bz + t * (cz - bz)
        out[3] = 0.0; out[4] = 1.0 - t; out[5] = t
        return
    denom = 1.0 / (va + vb + vc)
    v = vb * denom
    w = vc * denom
    out[0] = ax + abx * v + acx * w
    out[1] = ay + aby * v + acy * w
    out[2] = az + abz * v + acz * w
    out[3] = 1.0 - v - w; out[4] = v; out[5] = w


cdef int _sphere_forces(
    double[:, ::1] pos, double[:, ::1] vel, double[:, ::1] f,
    double[::1] sph, double* fs,
    int[:, ::1] tri, Py_ssize_t n_tri,
    double mass_s, double radius, double kn, double dn, double mu_f,
    double dt, int ground_enabled,
) noexcept nogil:
    cdef int contact = 0
    cdef double dn_cap = mass_s / (2.0 * dt)
    cdef double dn_eff = dn if dn < dn_cap else dn_cap
    cdef double phi, fn, vt, fmax, fstop, ft
    cdef Py_ssize_t t
    cdef int i, j, k
    cdef double q[6]
    cdef double dx, dy, dz, dist2, dist, nx, ny, nz
    cdef double u, v, w, vcx, vcy, vcz, rvx, rvy, rvz, vn
    cdef double fx, fy, fz, vtx, vty, vtz
    if ground_enabled:
        phi = radius - sph[2]
        if phi > 0.0:
            contact = 1
            fn = kn * phi - dn_eff * sph[5]
            if fn < 0.0:
                fn = 0.0
            fs[2] += fn
            vt = sqrt(sph[3] * sph[3] + sph[4] * sph[4])
            if vt > 1e-12:
                fmax = mu_f * fn
                fstop = mass_s * vt / dt
                ft = fmax if fmax < fstop else fstop
                fs[0] -= ft * sph[3] / vt
                fs[1] -= ft * sph[4] / vt
    for t in range(n_tri):
        i = tri[t, 0]
        j = tri[t, 1]
        k = tri[t, 2]
        _closest_pt(
            sph[0], sph[1], sph[2],
            pos[i, 0], pos[i, 1], pos[i, 2],
            pos[j, 0], pos[j, 1], pos[j, 2],
            pos[k, 0], pos[k, 1], pos[k, 2],
            q,
        )
        dx = sph[0] - q[0]
        dy = sph[1] - q[1]
        dz = sph[2] - q[2]
        dist2 = dx * dx + dy * dy + dz * dz
        if dist2 >= radius * radius or dist2 < 1e-24:
            continue
        contact = 1
        dist = sqrt(dist2)
        nx = dx / dist
        ny = dy / dist
        nz = dz / dist
        phi = radius - dist
        u = q[3]
        v = q[4]
        w = q[5]
        vcx = u * vel[i, 0] + v * vel[j, 0] + w * vel[k, 0]
        vcy = u * vel[i, 1] + v * vel[j, 1] + w * vel[k, 1]
        vcz = u * vel[i, 2] + v * vel[j, 2] + w * vel[k, 2]
        rvx = sph[3] - vcx
        rvy = sph[4] - vcy
        rvz = sph[5] - vcz
        vn = rvx * nx + rvy * ny + rvz * nz
        fn = kn * phi - dn_eff * vn
        if fn < 0.0:
            fn = 0.0
        fx = fn * nx
        fy = fn * ny
        fz = fn * nz
        vtx = rvx - vn * nx
        vty = rvy - vn * ny
        vtz = rvz - vn * nz
        vt = sqrt(vtx * vtx + vty * vty + vtz * vtz)
        if vt > 1e-12:
            fmax = mu_f * fn
            fstop = mass_s * vt / dt
            ft = fmax if fmax < fstop else fstop
            fx -= ft * vtx / vt
            fy -= ft * vty / vt
            fz -= ft * vtz / vt
        fs[0] += fx
        fs[1] += fy
        fs[2] += fz
        f[i, 0] -= u * fx
        f[i, 1] -= u * fy
        f[i, 2] -= u * fz
        f[j, 0] -= v * fx
        f[j, 1] -= v * fy
        f[j, 2] -= v * fz
        f[k, 0] -= w * fx
        f[k, 1] -= w * fy
        f[k, 2] -= w * fz
    return contact


cdef void _accum_actuation(
    double[:, ::1] pos, double[:, ::1] vel, double[:, ::1] f,
    double[::1] mass, Py_ssize_t n_events,
    int[::1] act_idx, int[::1] act_axis,
    double[::1] act_base, double[::1] act_target,
    long long[::1] act_trigger, double[::1] act_vmax, double[::1] act_gain,
    long long step, double dt,
) noexcept nogil:
    cdef Py_ssize_t e
    cdef int i, ax
    cdef double target, travel, mag, r, g, m
    for e in range(n_events):
        if step < act_trigger[e]:
            continue
        i = act_idx[e]
        ax = act_axis[e]
        target = act_target[e]
        travel = act_vmax[e] * dt * (step - act_trigger[e])
        mag = target if target >= 0.0 else -target
        if travel > mag:
            travel = mag
        r = act_base[e] + (travel if target >= 0.0 else -travel)
        g = act_gain[e]
        m = mass[i]
        f[i, ax] += m * (g * g * (r - pos[i, ax]) - 2.0 * g * vel[i, ax])


def advance_arrays(
    pos, vel, sph,
    tri, dm_inv, rest_area, hinge, hinge_rest, mass, free,
    lam, mu, thickness, k_bend, damping,
    gx, gy, gz, dt,
    ground_enabled, kn, dn, mu_f,
    sphere_enabled, s_mass, s_radius,
    act_idx, act_axis, act_base, act_target, act_trigger, act_vmax, act_gain,
    step0, n_steps, stop_speed, stop_steps, rest_counter,
):
    cdef double[:, ::1] p = pos
    cdef double[:, ::1] v = vel
    cdef double[::1] s = sph
    cdef int[:, ::1] tri_v = tri
    cdef double[:, ::1] dmi = dm_inv
    cdef double[::1] area_v = rest_area
    cdef int[:, ::1] hinge_v = hinge
    cdef double[::1] hrest = hinge_rest
    cdef double[::1] mass_v = mass
    cdef cnp.uint8_t[:, ::1] free_v = free
    cdef int[::1] ai = act_idx
    cdef int[::1] aa = act_axis
    cdef double[::1] ab = act_base
    cdef double[::1] at = act_target
    cdef long long[::1] atrig = act_trigger
    cdef double[::1] avm = act_vmax
    cdef double[::1] ag = act_gain

    cdef double c_lam = lam, c_mu = mu, c_th = thickness
    cdef double c_kb = k_bend, c_damp = damping
    cdef double c_gx = gx, c_gy = gy, c_gz = gz, c_dt = dt
    cdef int c_ground = ground_enabled, c_sphere = sphere_enabled
    cdef double c_kn = kn, c_dn = dn, c_muf = mu_f
    cdef double c_sm = s_mass, c_sr = s_radius
    cdef long long c_step0 = step0
    cdef long long c_nsteps = n_steps
    cdef double c_stop_speed = stop_speed
    cdef long long c_stop_steps = stop_steps
    cdef long long c_rest = rest_counter

    cdef Py_ssize_t n = p.shape[0]
    cdef Py_ssize_t n_tri = tri_v.shape[0]
    cdef Py_ssize_t n_hinge = hinge_v.shape[0]
    cdef Py_ssize_t n_events = ai.shape[0]

    fbuf = np.zeros((n, 3), dtype=np.float64)
    cdef double[:, ::1] f = fbuf
    cdef double fs[3]

    cdef long long local, step
    cdef Py_ssize_t i
    cdef double m, vx, vy, vz, speed
    cdef int contact, blown, status = 0
    cdef long long steps_done = 0

    with nogil:
        for local in range(c_nsteps):
            step = c_step0 + local
            for i in range(n):
                m = mass_v[i]
                f[i, 0] = m * c_gx - c_damp * m * v[i, 0]
                f[i, 1] = m * c_gy - c_damp * m * v[i, 1]
                f[i, 2] = m * c_gz - c_damp * m * v[i, 2]
            _accum_membranes(p, f, tri_v, dmi, area_v, c_lam, c_mu, c_th)
            if n_hinge:
                _accum_hinges(p, f, hinge_v, hrest, c_kb)
            contact = 0
            if c_ground:
                _accum_ground_keypoints(p, v, f, mass_v, n, c_kn, c_dn, c_muf, c_dt)
            if c_sphere:
                fs[0] = c_sm * c_gx
                fs[1] = c_sm * c_gy
                fs[2] = c_sm * c_gz
                contact = _sphere_forces(
                    p, v, f, s, fs, tri_v, n_tri,
                    c_sm, c_sr, c_kn, c_dn, c_muf, c_dt, c_ground,
                )
            if n_events:
                _accum_actuation(
                    p, v, f, mass_v, n_events,
                    ai, aa, ab, at, atrig, avm, ag, step, c_dt,
                )

            blown = 0
            for i in range(n):
                m = mass_v[i]
                vx = v[i, 0] + c_dt * f[i, 0] / m
                vy = v[i, 1] + c_dt * f[i, 1] / m
                vz = v[i, 2] + c_dt * f[i, 2] / m
                if free_v[i, 0] == 0:
                    vx = 0.0
                if free_v[i, 1] == 0:
                    vy = 0.0
                if free_v[i, 2] == 0:
                    vz = 0.0
                v[i, 0] = vx
                v[i, 1] = vy
                v[i, 2] = vz
                p[i, 0] += c_dt * vx
                p[i, 1] += c_dt * vy
                p[i, 2] += c_dt * vz
                if (
                    p[i, 0] > BLOWUP_LIMIT or p[i, 0] < -BLOWUP_LIMIT
                    or p[i, 1] > BLOWUP_LIMIT or p[i, 1] < -BLOWUP_LIMIT
                    or p[i, 2] > BLOWUP_LIMIT or p[i, 2] < -BLOWUP_LIMIT
                ):
                    blown = 1
            if c_sphere:
                s[3] += c_dt * fs[0] / c_sm
                s[4] += c_dt * fs[1] / c_sm
                s[5] += c_dt * fs[2] / c_sm
                s[0] += c_dt * s[3]
                s[1] += c_dt * s[4]
                s[2] += c_dt * s[5]
                if (
                    s[0] > BLOWUP_LIMIT or s[0] < -BLOWUP_LIMIT
                    or s[1] > BLOWUP_LIMIT or s[1] < -BLOWUP_LIMIT
                    or s[2] > BLOWUP_LIMIT or s[2] < -BLOWUP_LIMIT
                ):
                    blown = 1
            if blown:
                status = 2
                steps_done = local + 1
                break

            if c_sphere:
                speed = sqrt(s[3] * s[3] + s[4] * s[4] + s[5] * s[5])
                if contact and speed < c_stop_speed:
                    c_rest = c_rest + 1
                    if c_rest >= c_stop_steps:
                        status = 1
                        steps_done = local + 1
                        break
                else:
                    c_rest = 0
            if local == c_nsteps - 1:
                steps_done = c_nsteps

    if status == 0:
        steps_done = c_nsteps
    return status, int(steps_done), int(c_rest)


# --- single-shot force queries (tests and oracles) --------------------------

def membrane_forces_arrays(pos, tri, dm_inv, rest_area, lam, mu, thickness):
    f = np.zeros((pos.shape[0], 3), dtype=np.float64)
    cdef double[:, ::1] fv = f
    cdef double[:, ::1] p = np.ascontiguousarray(pos, dtype=np.float64)
    cdef int[:, ::1] t = np.ascontiguousarray(tri, dtype=np.int32)
    cdef double[:, ::1] dmi = np.ascontiguousarray(dm_inv, dtype=np.float64)
    cdef double[::1] a = np.ascontiguousarray(rest_area, dtype=np.float64)
    _accum_membranes(p, fv, t, dmi, a, lam, mu, thickness)
    return f


def hinge_forces_arrays(pos, hinge, hinge_rest, k_bend):
    f = np.zeros((pos.shape[0], 3), dtype=np.float64)
    cdef double[:, ::1] fv = f
    cdef double[:, ::1] p = np.ascontiguousarray(pos, dtype=np.float64)
    if hinge.shape[0] == 0:
        return f
    cdef int[:, ::1] h = np.ascontiguousarray(hinge, dtype=np.int32)
    cdef double[::1] hr = np.ascontiguousarray(hinge_rest, dtype=np.float64)
    _accum_hinges(p, fv, h, hr, k_bend)
    return f


def contact_forces_arrays(
    pos, vel, sph, sphere_enabled, tri, mass, s_mass, s_radius,
    kn, dn, mu_f, dt, ground_enabled,
):
    f = np.zeros((pos.shape[0], 3), dtype=np.float64)
    fs_out = np.zeros(3, dtype=np.float64)
    cdef double[:, ::1] fv = f
    cdef double[:, ::1] p = np.ascontiguousarray(pos, dtype=np.float64)
    cdef double[:, ::1] v = np.ascontiguousarray(vel, dtype=np.float64)
    cdef double[::1] s = np.ascontiguousarray(sph, dtype=np.float64)
    cdef int[:, ::1] t = np.ascontiguousarray(tri, dtype=np.int32)
    cdef double[::1] ms = np.ascontiguousarray(mass, dtype=np.float64)
    cdef double fs[3]
    cdef int contact = 0
    fs[0] = 0.0
    fs[1] = 0.0
    fs[2] = 0.0
    if ground_enabled:
        _accum_ground_keypoints(p, v, fv, ms, p.shape[0], kn, dn, mu_f, dt)
    if sphere_enabled:
        contact = _sphere_forces(
            p, v, fv, s, fs, t, t.shape[0],
            s_mass, s_radius, kn, dn, mu_f, dt, 1 if ground_enabled else 0,
        )
    fs_out[0] = fs[0]
    fs_out[1] = fs[1]
    fs_out[2] = fs[2]
    return f, fs_out, int(contact)


def actuation_forces_arrays(
    pos, vel, mass,
    act_idx, act_axis, act_base, act_target, act_trigger, act_vmax, act_gain,
    step, dt,
):
    f = np.zeros((pos.shape[0], 3), dtype=np.float64)
    cdef double[:, ::1] fv = f
    cdef double[:, ::1] p = np.ascontiguousarray(pos, dtype=np.float64)
    cdef double[:, ::1] v = np.ascontiguousarray(vel, dtype=np.float64)
    cdef double[::1] ms = np.ascontiguousarray(mass, dtype=np.float64)
    cdef int[::1] ai = np.ascontiguousarray(act_idx, dtype=np.int32)
    cdef int[::1] aa = np.ascontiguousarray(act_axis, dtype=np.int32)
    cdef double[::1] ab = np.ascontiguousarray(act_base, dtype=np.float64)
    cdef double[::1] at = np.ascontiguousarray(act_target, dtype=np.float64)
    cdef long long[::1] atrig = np.ascontiguousarray(act_trigger, dtype=np.int64)
    cdef double[::1] avm = np.ascontiguousarray(act_vmax, dtype=np.float64)
    cdef double[::1] ag = np.ascontiguousarray(act_gain, dtype=np.float64)
    _accum_actuation(p, v, fv, ms, ai.shape[0], ai, aa, ab, at, atrig, avm, ag, step, dt)
    return f
