"""Certified witness search for unions of Niemytzki balls.

Given the filtered set S = F_α (generators of F minus open forbidden discs)
and a radius ρ, decide whether a query q lies in

* the open union  ⋃{K(x, ρ) : x ∈ S}, or
* its closed outer hull  {z : |z - x| <= ρ for some x ∈ F minus the
  forbidden discs} ∪ {z : |z - (s, ρ)| <= ρ for some axis member s}.

Off-axis members are searched over a quadtree of closed rational cells and
axis members over bisected intervals.  A cell is discarded only when an
exact predicate proves it holds no witness; a witness is reported only after
the exact membership tests pass at a rational point.  Running out of depth
or cells yields UNKNOWN, never a wrong answer.
"""

from __future__ import annotations

from .exact import ZERO, sqrt_upper

IN, OUT, UNKNOWN = "in", "out", "unknown"


def cell_cap(depth):
    # nondecreasing in depth, so a deeper budget never undoes a verdict
    return 32 * depth * depth


def _d2(ax, ay, bx, by):
    dx = ax - bx
    dy = ay - by
    return dx * dx + dy * dy


def _gap(v, lo, hi):
    if v < lo:
        return lo - v
    if v > hi:
        return v - hi
    return ZERO


def _far(v, lo, hi):
    a, b = v - lo, hi - v
    a = -a if a < 0 else a
    b = -b if b < 0 else b
    return a if a > b else b


def off_axis(q, region, rho, closed, depth):
    """Search x with y > 0 (open) or y >= 0 (closed) in F minus forbidden discs,
    |x - q| < ρ (open) or <= ρ (closed).  Returns (status, witness, levels)."""
    if depth < 1:
        return UNKNOWN, None, 0
    qx, qy = q
    rho2 = rho * rho
    fs = []
    for f in region.F:
        cx, cy = f.center
        r = f.radius
        s = rho + r
        D = _d2(qx, qy, cx, cy)
        if D < s * s or (closed and D == s * s):
            fs.append((cx, cy, r, r * r))
    if not fs:
        return OUT, None, 0
    us = []
    for (ux, uy), R in region.forbidden:
        s = rho + R
        if _d2(qx, qy, ux, uy) < s * s:
            us.append((ux, uy, R * R))

    def ok(wx, wy):
        if wy < 0 or (wy == 0 and not closed):
            return False
        dq = _d2(wx, wy, qx, qy)
        if dq > rho2 or (dq == rho2 and not closed):
            return False
        for cx, cy, _, r2 in fs:
            if _d2(wx, wy, cx, cy) <= r2:
                break
        else:
            return False
        for ux, uy, R2 in us:
            if _d2(wx, wy, ux, uy) < R2:
                return False
        return True

    candidates = [(qx, qy)]
    for cx, cy, _, _ in fs:
        D = _d2(qx, qy, cx, cy)
        if D <= rho2:
            candidates.append((cx, cy))
        elif D > 0:
            lam = rho / (2 * sqrt_upper(D))
            candidates.append((qx + lam * (cx - qx), qy + lam * (cy - qy)))
    for w in candidates:
        if ok(*w):
            return IN, w, 1

    def prune(x0, y0, x1, y1):
        dx, dy = _gap(qx, x0, x1), _gap(qy, y0, y1)
        m = dx * dx + dy * dy
        if m > rho2 or (m == rho2 and not closed):
            return True
        if y1 <= 0 and not closed:
            return True
        for cx, cy, _, r2 in fs:
            dx, dy = _gap(cx, x0, x1), _gap(cy, y0, y1)
            if dx * dx + dy * dy <= r2:
                break
        else:
            return True
        for ux, uy, R2 in us:
            dx, dy = _far(ux, x0, x1), _far(uy, y0, y1)
            if dx * dx + dy * dy < R2:
                return True
        return False

    x0 = max(qx - rho, min(cx - r for cx, _, r, _ in fs))
    x1 = min(qx + rho, max(cx + r for cx, _, r, _ in fs))
    y0 = max(ZERO, qy - rho, min(cy - r for _, cy, r, _ in fs))
    y1 = min(qy + rho, max(cy + r for _, cy, r, _ in fs))
    if x0 > x1 or y0 > y1:
        return OUT, None, 0
    return _quadtree((x0, y0, x1, y1), prune, ok, depth)


def _quadtree(root, prune, ok, depth):
    cap = cell_cap(depth)
    level = [root]
    cells = 0
    used = 0
    for lev in range(depth):
        if not level:
            break
        used = lev + 1
        nxt = []
        for x0, y0, x1, y1 in level:
            cells += 1
            if cells > cap:
                return UNKNOWN, None, used
            if prune(x0, y0, x1, y1):
                continue
            mx, my = (x0 + x1) / 2, (y0 + y1) / 2
            if ok(mx, my):
                return IN, (mx, my), used
            xs = ((x0, mx), (mx, x1)) if x0 < x1 else ((x0, x1),)
            ys = ((y0, my), (my, y1)) if y0 < y1 else ((y0, y1),)
            if len(xs) == len(ys) == 1:
                continue
            for a, b in xs:
                for c, d in ys:
                    nxt.append((a, c, b, d))
        level = nxt
    if level:
        return UNKNOWN, None, used
    return OUT, None, used


def axis(q, region, rho, closed, depth):
    """Search axis members s of S with q in K((s,0), ρ) (open) or in the closed
    disc of radius ρ centred at (s, ρ) (closed)."""
    if depth < 1:
        return UNKNOWN, None, 0
    qx, qy = q
    alpha = region.alpha
    h2 = qy * (2 * rho - qy)
    fs = []
    for f in region.F:
        cx, cy = f.center
        r2 = f.radius * f.radius
        if cy * cy <= r2:
            fs.append((cx, cy, r2))
    if not fs:
        return OUT, None, 0
    us = [(ux, uy, R * R) for (ux, uy), R in region.forbidden]

    def member(s):
        for cx, cy, r2 in fs:
            if _d2(s, ZERO, cx, cy) <= r2:
                break
        else:
            return False
        for ux, uy, R2 in us:
            if _d2(s, alpha, ux, uy) < R2:
                return False
        return True

    if qy == 0 or h2 == 0:
        # only s = q.x can work: q is the tangency point itself (open), or
        # q sits on the closed disc's single admissible position (closed)
        if h2 < 0:
            return OUT, None, 0
        if (qy == 0 or closed) and member(qx):
            return IN, (qx, ZERO), 1
        return OUT, None, 1
    if h2 < 0:
        return OUT, None, 0

    def ok(s):
        d = (s - qx) * (s - qx)
        if d > h2 or (d == h2 and not closed):
            return False
        return member(s)

    if ok(qx):
        return IN, (qx, ZERO), 1

    def prune(s0, s1):
        g = _gap(qx, s0, s1)
        g2 = g * g
        if g2 > h2 or (g2 == h2 and not closed):
            return True
        for cx, cy, r2 in fs:
            dx = _gap(cx, s0, s1)
            if dx * dx + cy * cy <= r2:
                break
        else:
            return True
        for ux, uy, R2 in us:
            dy = alpha - uy
            dy2 = dy * dy
            if (s0 - ux) ** 2 + dy2 < R2 and (s1 - ux) ** 2 + dy2 < R2:
                return True
        return False

    lo, hi = qx - rho, qx + rho
    cap = cell_cap(depth)
    level = [(lo, hi)]
    cells = 0
    used = 0
    for lev in range(depth):
        if not level:
            break
        used = lev + 1
        nxt = []
        for s0, s1 in level:
            cells += 1
            if cells > cap:
                return UNKNOWN, None, used
            if prune(s0, s1):
                continue
            m = (s0 + s1) / 2
            if ok(m):
                return IN, (m, ZERO), used
            if s0 < s1:
                nxt.append((s0, m))
                nxt.append((m, s1))
        level = nxt
    if level:
        return UNKNOWN, None, used
    return OUT, None, used
