"""Pure-Python physics kernels.

Reference implementation of the per-step force and integration loop. The
compiled extension mirrors this file expression for expression; keep the
arithmetic order identical in both or bit-parity between backends breaks.
All math is scalar on purpose: accumulation order is then explicit, and
libm calls (sqrt, atan2) match the C backend bit for bit.
"""

import math

BACKEND_NAME = "python"

BLOWUP_LIMIT = 1e3


def _tri_membrane(pos, f, i, j, k, a, b, c, d, area, lam, mu, thickness):
    # deformation gradient F = [d1 d2] * Dm_inv, columns f1, f2 in R^3
    d1x = pos[j][0] - pos[i][0]
    d1y = pos[j][1] - pos[i][1]
    d1z = pos[j][2] - pos[i][2]
    d2x = pos[k][0] - pos[i][0]
    d2y = pos[k][1] - pos[i][1]
    d2z = pos[k][2] - pos[i][2]
    f1x = d1x * a + d2x * c
    f1y = d1y * a + d2y * c
    f1z = d1z * a + d2z * c
    f2x = d1x * b + d2x * d
    f2y = d1y * b + d2y * d
    f2z = d1z * b + d2z * d
    e11 = 0.5 * (f1x * f1x + f1y * f1y + f1z * f1z - 1.0)
    e22 = 0.5 * (f2x * f2x + f2y * f2y + f2z * f2z - 1.0)
    e12 = 0.5 * (f1x * f2x + f1y * f2y + f1z * f2z)
    tr = e11 + e22
    s11 = lam * tr + 2.0 * mu * e11
    s22 = lam * tr + 2.0 * mu * e22
    s12 = 2.0 * mu * e12
    # P = F * S (first Piola for StVK membranes), columns p1, p2
    p1x = f1x * s11 + f2x * s12
    p1y = f1y * s11 + f2y * s12
    p1z = f1z * s11 + f2z * s12
    p2x = f1x * s12 + f2x * s22
    p2y = f1y * s12 + f2y * s22
    p2z = f1z * s12 + f2z * s22
    coeff = -area * thickness
    # nodal forces H = coeff * P * Dm_inv^T; columns act on j and k
    gjx = coeff * (p1x * a + p2x * b)
    gjy = coeff * (p1y * a + p2y * b)
    gjz = coeff * (p1z * a + p2z * b)
    gkx = coeff * (p1x * c + p2x * d)
    gky = coeff * (p1y * c + p2y * d)
    gkz = coeff * (p1z * c + p2z * d)
    f[j][0] += gjx
    f[j][1] += gjy
    f[j][2] += gjz
    f[k][0] += gkx
    f[k][1] += gky
    f[k][2] += gkz
    f[i][0] -= gjx + gkx
    f[i][1] -= gjy + gky
    f[i][2] -= gjz + gkz


def accum_membranes(pos, f, tri, dm_inv, rest_area, lam, mu, thickness):
    for t in range(len(tri)):
        _tri_membrane(
            pos, f,
            tri[t][0], tri[t][1], tri[t][2],
            dm_inv[t][0], dm_inv[t][1], dm_inv[t][2], dm_inv[t][3],
            rest_area[t], lam, mu, thickness,
        )


def _hinge_angle(pos, i0, i1, i2, i3):
    ex = pos[i1][0] - pos[i0][0]
    ey = pos[i1][1] - pos[i0][1]
    ez = pos[i1][2] - pos[i0][2]
    ax = pos[i2][0] - pos[i0][0]
    ay = pos[i2][1] - pos[i0][1]
    az = pos[i2][2] - pos[i0][2]
    bx = pos[i3][0] - pos[i0][0]
    by = pos[i3][1] - pos[i0][1]
    bz = pos[i3][2] - pos[i0][2]
    nax = ey * az - ez * ay
    nay = ez * ax - ex * az
    naz = ex * ay - ey * ax
    nbx = by * ez - bz * ey
    nby = bz * ex - bx * ez
    nbz = bx * ey - by * ex
    le = math.sqrt(ex * ex + ey * ey + ez * ez)
    cx = nay * nbz - naz * nby
    cy = naz * nbx - nax * nbz
    cz = nax * nby - nay * nbx
    s = (cx * ex + cy * ey + cz * ez) / le
    c = nax * nbx + nay * nby + naz * nbz
    return math.atan2(s, c)


def accum_hinges(pos, f, hinge, hinge_rest, k_bend):
    if k_bend == 0.0:
        return
    for h in range(len(hinge)):
        i0, i1, i2, i3 = hinge[h][0], hinge[h][1], hinge[h][2], hinge[h][3]
        ex = pos[i1][0] - pos[i0][0]
        ey = pos[i1][1] - pos[i0][1]
        ez = pos[i1][2] - pos[i0][2]
        ax = pos[i2][0] - pos[i0][0]
        ay = pos[i2][1] - pos[i0][1]
        az = pos[i2][2] - pos[i0][2]
        bx = pos[i3][0] - pos[i0][0]
        by = pos[i3][1] - pos[i0][1]
        bz = pos[i3][2] - pos[i0][2]
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
            continue  # collapsed stencil; no meaningful torque
        le = math.sqrt(le2)
        cx = nay * nbz - naz * nby
        cy = naz * nbx - nax * nbz
        cz = nax * nby - nay * nbx
        s = (cx * ex + cy * ey + cz * ez) / le
        c = nax * nbx + nay * nby + naz * nbz
        theta = math.atan2(s, c)
        tau = -k_bend * (theta - hinge_rest[h])
        # grad theta: opposite vertices carry -|e| n / |n|^2, edge ends the rest
        ga = -le / la2
        gb = -le / lb2
        # (x2 - x1) . e and (x3 - x1) . e
        d21 = (pos[i2][0] - pos[i1][0]) * ex + (pos[i2][1] - pos[i1][1]) * ey + (pos[i2][2] - pos[i1][2]) * ez
        d31 = (pos[i3][0] - pos[i1][0]) * ex + (pos[i3][1] - pos[i1][1]) * ey + (pos[i3][2] - pos[i1][2]) * ez
        d20 = ax * ex + ay * ey + az * ez
        d30 = bx * ex + by * ey + bz * ez
        c0a = -d21 / (le * la2)
        c0b = -d31 / (le * lb2)
        c1a = d20 / (le * la2)
        c1b = d30 / (le * lb2)
        f[i2][0] += tau * (ga * nax)
        f[i2][1] += tau * (ga * nay)
        f[i2][2] += tau * (ga * naz)
        f[i3][0] += tau * (gb * nbx)
        f[i3][1] += tau * (gb * nby)
        f[i3][2] += tau * (gb * nbz)
        f[i0][0] += tau * (c0a * nax + c0b * nbx)
        f[i0][1] += tau * (c0a * nay + c0b * nby)
        f[i0][2] += tau * (c0a * naz + c0b * nbz)
        f[i1][0] += tau * (c1a * nax + c1b * nbx)
        f[i1][1] += tau * (c1a * nay + c1b * nby)
        f[i1][2] += tau * (c1a * naz + c1b * nbz)


def accum_ground_keypoints(pos, vel, f, mass, n, kn, dn, mu_f, dt):
    any_contact = 0
    for i in range(n):
        phi = -pos[i][2]
        if phi <= 0.0:
            continue
        any_contact = 1
        dn_cap = mass[i] / (2.0 * dt)
        dn_eff = dn if dn < dn_cap else dn_cap
        fn = kn * phi - dn_eff * vel[i][2]
        if fn < 0.0:
            fn = 0.0
        f[i][2] += fn
        vtx = vel[i][0]
        vty = vel[i][1]
        vt = math.sqrt(vtx * vtx + vty * vty)
        if vt > 1e-12:
            fmax = mu_f * fn
            fstop = mass[i] * vt / dt
            ft = fmax if fmax < fstop else fstop
            f[i][0] -= ft * vtx / vt
            f[i][1] -= ft * vty / vt
    return any_contact


def _closest_point_triangle(px, py, pz, ax, ay, az, bx, by, bz, cx, cy, cz):
    """Ericson-style closest point; returns (qx, qy, qz, u, v, w)."""
    abx, aby, abz = bx - ax, by - ay, bz - az
    acx, acy, acz = cx - ax, cy - ay, cz - az
    apx, apy, apz = px - ax, py - ay, pz - az
    d1 = abx * apx + aby * apy + abz * apz
    d2 = acx * apx + acy * apy + acz * apz
    if d1 <= 0.0 and d2 <= 0.0:
        return ax, ay, az, 1.0, 0.0, 0.0
    bpx, bpy, bpz = px - bx, py - by, pz - bz
    d3 = abx * bpx + aby * bpy + abz * bpz
    d4 = acx * bpx + acy * bpy + acz * bpz
    if d3 >= 0.0 and d4 <= d3:
        return bx, by, bz, 0.0, 1.0, 0.0
    vc = d1 * d4 - d3 * d2
    if vc <= 0.0 and d1 >= 0.0 and d3 <= 0.0:
        t = d1 / (d1 - d3)
        return ax + t * abx, ay + t * aby, az + t * abz, 1.0 - t, t, 0.0
    cpx, cpy, cpz = px - cx, py - cy, pz - cz
    d5 = abx * cpx + aby * cpy + abz * cpz
    d6 = acx * cpx + acy * cpy + acz * cpz
    if d6 >= 0.0 and d5 <= d6:
        return cx, cy, cz, 0.0, 0.0, 1.0
    vb = d5 * d2 - d1 * d6
    if vb <= 0.0 and d2 >= 0.0 and d6 <= 0.0:
        t = d2 / (d2 - d6)
        return ax + t * acx, ay + t * acy, az + t * acz, 1.0 - t, 0.0, t
    va = d3 * d6 - d5 * d4
    if va <= 0.0 and (d4 - d3) >= 0.0 and (d5 - d6) >= 0.0:
        t = (d4 - d3) / ((d4 - d3) + (d5 - d6))
        return (
            bx + t * (cx - bx), by + t * (cy - by), bz + t * (cz - bz),
            0.0, 1.0 - t, t,
        )
    denom = 1.0 / (va + vb + vc)
    v = vb * denom
    w = vc * denom
    return (
        ax + abx * v + acx * w, ay + aby * v + acy * w, az + abz * v + acz * w,
        1.0 - v - w, v, w,
    )


def sphere_forces(
    pos, vel, f, sph, fs,
    tri, n_tri, mass_s, radius, kn, dn, mu_f, dt, ground_enabled,
):
    """Sphere gravity is handled by the caller; this adds contact terms."""
    contact = 0
    dn_cap = mass_s / (2.0 * dt)
    dn_eff = dn if dn < dn_cap else dn_cap
    if ground_enabled:
        phi = radius - sph[2]
        if phi > 0.0:
            contact = 1
            fn = kn * phi - dn_eff * sph[5]
            if fn < 0.0:
                fn = 0.0
            fs[2] += fn
            vt = math.sqrt(sph[3] * sph[3] + sph[4] * sph[4])
            if vt > 1e-12:
                fmax = mu_f * fn
                fstop = mass_s * vt / dt
                ft = fmax if fmax < fstop else fstop
                fs[0] -= ft * sph[3] / vt
                fs[1] -= ft * sph[4] / vt
    for t in range(n_tri):
        i, j, k = tri[t][0], tri[t][1], tri[t][2]
        qx, qy, qz, u, v, w = _closest_point_triangle(
            sph[0], sph[1], sph[2],
            pos[i][0], pos[i][1], pos[i][2],
            pos[j][0], pos[j][1], pos[j][2],
            pos[k][0], pos[k][1], pos[k][2],
        )
        dx = sph[0] - qx
        dy = sph[1] - qy
        dz = sph[2] - qz
        dist2 = dx * dx + dy * dy + dz * dz
        if dist2 >= radius * radius or dist2 < 1e-24:
            continue
        contact = 1
        dist = math.sqrt(dist2)
        nx, ny, nz = dx / dist, dy / dist, dz / dist
        phi = radius - dist
        # contact-point velocity from barycentric blend of vertex velocities
        vcx = u * vel[i][0] + v * vel[j][0] + w * vel[k][0]
        vcy = u * vel[i][1] + v * vel[j][1] + w * vel[k][1]
        vcz = u * vel[i][2] + v * vel[j][2] + w * vel[k][2]
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
        vt = math.sqrt(vtx * vtx + vty * vty + vtz * vtz)
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
        f[i][0] -= u * fx
        f[i][1] -= u * fy
        f[i][2] -= u * fz
        f[j][0] -= v * fx
        f[j][1] -= v * fy
        f[j][2] -= v * fz
        f[k][0] -= w * fx
        f[k][1] -= w * fy
        f[k][2] -= w * fz
    return contact


def accum_actuation(
    pos, vel, f, mass, n_events,
    act_idx, act_axis, act_base, act_target, act_trigger, act_vmax, act_gain,
    step, dt,
):
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
        f[i][ax] += m * (g * g * (r - pos[i][ax]) - 2.0 * g * vel[i][ax])


def advance(
    pos, vel, sph,
    tri, dm_inv, rest_area,
    hinge, hinge_rest,
    mass, free,
    lam, mu, thickness, k_bend, damping,
    gx, gy, gz, dt,
    ground_enabled, kn, dn, mu_f,
    sphere_enabled, s_mass, s_radius,
    act_idx, act_axis, act_base, act_target, act_trigger, act_vmax, act_gain,
    step0, n_steps,
    stop_speed, stop_steps, rest_counter,
):
    """Run n_steps of semi-implicit Euler; returns (status, steps_done, rest_counter).

    status 0: completed; 1: early stop (sphere at rest); 2: blowup.
    Mutates pos, vel, sph in place. Inputs are nested lists of floats.
    """
    n = len(pos)
    n_tri = len(tri)
    n_hinge = len(hinge)
    n_events = len(act_idx)
    f = [[0.0, 0.0, 0.0] for _ in range(n)]
    fs = [0.0, 0.0, 0.0]

    for local in range(n_steps):
        step = step0 + local
        for i in range(n):
            m = mass[i]
            f[i][0] = m * gx - damping * m * vel[i][0]
            f[i][1] = m * gy - damping * m * vel[i][1]
            f[i][2] = m * gz - damping * m * vel[i][2]
        accum_membranes(pos, f, tri, dm_inv, rest_area, lam, mu, thickness)
        if n_hinge:
            accum_hinges(pos, f, hinge, hinge_rest, k_bend)
        contact = 0
        if ground_enabled:
            accum_ground_keypoints(pos, vel, f, mass, n, kn, dn, mu_f, dt)
        if sphere_enabled:
            fs[0] = s_mass * gx
            fs[1] = s_mass * gy
            fs[2] = s_mass * gz
            contact = sphere_forces(
                pos, vel, f, sph, fs,
                tri, n_tri, s_mass, s_radius, kn, dn, mu_f, dt, ground_enabled,
            )
        if n_events:
            accum_actuation(
                pos, vel, f, mass, n_events,
                act_idx, act_axis, act_base, act_target, act_trigger,
                act_vmax, act_gain, step, dt,
            )

        blown = False
        for i in range(n):
            m = mass[i]
            vx = vel[i][0] + dt * f[i][0] / m
            vy = vel[i][1] + dt * f[i][1] / m
            vz = vel[i][2] + dt * f[i][2] / m
            if not free[i][0]:
                vx = 0.0
            if not free[i][1]:
                vy = 0.0
            if not free[i][2]:
                vz = 0.0
            vel[i][0] = vx
            vel[i][1] = vy
            vel[i][2] = vz
            pos[i][0] += dt * vx
            pos[i][1] += dt * vy
            pos[i][2] += dt * vz
            if (
                pos[i][0] > BLOWUP_LIMIT or pos[i][0] < -BLOWUP_LIMIT
                or pos[i][1] > BLOWUP_LIMIT or pos[i][1] < -BLOWUP_LIMIT
                or pos[i][2] > BLOWUP_LIMIT or pos[i][2] < -BLOWUP_LIMIT
            ):
                blown = True
        if sphere_enabled:
            sph[3] += dt * fs[0] / s_mass
            sph[4] += dt * fs[1] / s_mass
            sph[5] += dt * fs[2] / s_mass
            sph[0] += dt * sph[3]
            sph[1] += dt * sph[4]
            sph[2] += dt * sph[5]
            if (
                sph[0] > BLOWUP_LIMIT or sph[0] < -BLOWUP_LIMIT
                or sph[1] > BLOWUP_LIMIT or sph[1] < -BLOWUP_LIMIT
                or sph[2] > BLOWUP_LIMIT or sph[2] < -BLOWUP_LIMIT
            ):
                blown = True
        if blown:
            return 2, local + 1, rest_counter

        if sphere_enabled:
            speed = math.sqrt(
                sph[3] * sph[3] + sph[4] * sph[4] + sph[5] * sph[5]
            )
            if contact and speed < stop_speed:
                rest_counter += 1
                if rest_counter >= stop_steps:
                    return 1, local + 1, rest_counter
            else:
                rest_counter = 0
    return 0, n_steps, rest_counter


# --- numpy-facing wrappers (uniform API with the compiled backend) ----------

import numpy as _np


def _tolists(a):
    return [list(map(float, row)) for row in a]


def _tolist1(a):
    return [float(v) for v in a]


def _toint(a):
    return [[int(v) for v in row] for row in a]


def membrane_forces_arrays(pos, tri, dm_inv, rest_area, lam, mu, thickness):
    p = _tolists(pos)
    f = [[0.0, 0.0, 0.0] for _ in range(len(p))]
    accum_membranes(
        p, f, _toint(tri), _tolists(dm_inv), _tolist1(rest_area),
        float(lam), float(mu), float(thickness),
    )
    return _np.asarray(f, dtype=_np.float64)


def hinge_forces_arrays(pos, hinge, hinge_rest, k_bend):
    p = _tolists(pos)
    f = [[0.0, 0.0, 0.0] for _ in range(len(p))]
    if len(hinge):
        accum_hinges(p, f, _toint(hinge), _tolist1(hinge_rest), float(k_bend))
    return _np.asarray(f, dtype=_np.float64)


def contact_forces_arrays(
    pos, vel, sph, sphere_enabled, tri, mass, s_mass, s_radius,
    kn, dn, mu_f, dt, ground_enabled,
):
    p = _tolists(pos)
    v = _tolists(vel)
    f = [[0.0, 0.0, 0.0] for _ in range(len(p))]
    fs = [0.0, 0.0, 0.0]
    ms = _tolist1(mass)
    contact = 0
    if ground_enabled:
        accum_ground_keypoints(
            p, v, f, ms, len(p), float(kn), float(dn), float(mu_f), float(dt)
        )
    if sphere_enabled:
        s = _tolist1(sph)
        contact = sphere_forces(
            p, v, f, s, fs, _toint(tri), len(tri),
            float(s_mass), float(s_radius), float(kn), float(dn), float(mu_f),
            float(dt), 1 if ground_enabled else 0,
        )
    return _np.asarray(f, dtype=_np.float64), _np.asarray(fs), contact


def actuation_forces_arrays(
    pos, vel, mass,
    act_idx, act_axis, act_base, act_target, act_trigger, act_vmax, act_gain,
    step, dt,
):
    p = _tolists(pos)
    v = _tolists(vel)
    f = [[0.0, 0.0, 0.0] for _ in range(len(p))]
    accum_actuation(
        p, v, f, _tolist1(mass), len(act_idx),
        [int(x) for x in act_idx], [int(x) for x in act_axis],
        _tolist1(act_base), _tolist1(act_target),
        [int(x) for x in act_trigger], _tolist1(act_vmax), _tolist1(act_gain),
        int(step), float(dt),
    )
    return _np.asarray(f, dtype=_np.float64)


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
    p = _tolists(pos)
    v = _tolists(vel)
    s = _tolist1(sph)
    status, steps_done, rc = advance(
        p, v, s,
        _toint(tri), _tolists(dm_inv), _tolist1(rest_area),
        _toint(hinge), _tolist1(hinge_rest),
        _tolist1(mass), _toint(free),
        float(lam), float(mu), float(thickness), float(k_bend), float(damping),
        float(gx), float(gy), float(gz), float(dt),
        1 if ground_enabled else 0, float(kn), float(dn), float(mu_f),
        1 if sphere_enabled else 0, float(s_mass), float(s_radius),
        [int(x) for x in act_idx], [int(x) for x in act_axis],
        _tolist1(act_base), _tolist1(act_target),
        [int(x) for x in act_trigger], _tolist1(act_vmax), _tolist1(act_gain),
        int(step0), int(n_steps), float(stop_speed), int(stop_steps),
        int(rest_counter),
    )
    pos[:] = p
    vel[:] = v
    sph[:] = s
    return status, steps_done, rc
