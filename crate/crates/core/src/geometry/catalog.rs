//! Distance oracles for the catalog sets.
//!
//! All of the 2D/3D catalog fractals are complements of countably many
//! removed open cells (triangles, squares, cubes, one octagonal polygon);
//! the boundary of every removed cell survives in the set. A point inside
//! a removed cell therefore has its nearest set point on that cell's own
//! boundary, so a containing-cell descent computes the distance exactly.

use crate::error::{Error, Result};

/// Hard cap on recursive pruning depth; exceeding it is an error,
/// not silent truncation.
pub const MAX_DEPTH: u32 = 64;

/// Depth needed so the cell diameter drops below `tol`:
/// `ceil(log(diam/tol)/log(1/r_min))`, capped at [`MAX_DEPTH`].
pub fn pruning_depth(diam: f64, tol: f64, r_min: f64) -> Result<u32> {
    let need = ((diam / tol).ln() / (1.0 / r_min).ln()).ceil();
    if need > MAX_DEPTH as f64 {
        return Err(Error::DepthCapExceeded { cap: MAX_DEPTH, tol });
    }
    Ok(need.max(1.0) as u32)
}

/// Distance from `x` to the ternary Cantor set in `[0,1]`, exact to
/// ~`3^-depth` via the digit walk.
pub fn cantor_distance(x: f64, tol: f64) -> Result<f64> {
    if x <= 0.0 {
        return Ok(-x);
    }
    if x >= 1.0 {
        return Ok(x - 1.0);
    }
    let depth = pruning_depth(1.0, tol, 1.0 / 3.0)?;
    let mut u = x;
    let mut scale = 1.0;
    for _ in 0..depth {
        u *= 3.0;
        scale /= 3.0;
        if u < 1.0 {
            continue;
        } else if u > 2.0 {
            u -= 2.0;
        } else {
            // inside the deleted middle third: endpoints are set points
            return Ok(scale * (u - 1.0).min(2.0 - u));
        }
    }
    Ok(0.0)
}

fn seg_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let ap = [p[0] - a[0], p[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if len2 > 0.0 { ((ap[0] * ab[0] + ap[1] * ab[1]) / len2).clamp(0.0, 1.0) } else { 0.0 };
    let dx = ap[0] - t * ab[0];
    let dy = ap[1] - t * ab[1];
    (dx * dx + dy * dy).sqrt()
}

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Distance to the Sierpinski gasket built on the unit triangle
/// (0,0), (1,0), (1/2, √3/2).
pub fn gasket_distance(p: [f64; 2], tol: f64) -> Result<f64> {
    let depth = pruning_depth(1.0, tol, 0.5)?;
    // outside the convex hull: the hull edges belong to the gasket
    let v0 = [0.0, 0.0];
    let v1 = [1.0, 0.0];
    let v2 = [0.5, SQRT3 / 2.0];
    let bary = |q: [f64; 2]| {
        let l2 = 2.0 * q[1] / SQRT3;
        let l1 = q[0] - q[1] / SQRT3;
        let l0 = 1.0 - l1 - l2;
        [l0, l1, l2]
    };
    let l = bary(p);
    if l.iter().any(|&li| li < 0.0) {
        return Ok(seg_distance(p, v0, v1).min(seg_distance(p, v1, v2)).min(seg_distance(p, v2, v0)));
    }
    let mut u = p;
    let mut scale = 1.0;
    for _ in 0..depth {
        let l = bary(u);
        if l[0] >= 0.5 {
            u = [2.0 * u[0], 2.0 * u[1]];
        } else if l[1] >= 0.5 {
            u = [2.0 * u[0] - 1.0, 2.0 * u[1]];
        } else if l[2] >= 0.5 {
            u = [2.0 * u[0] - 0.5, 2.0 * u[1] - SQRT3 / 2.0];
        } else {
            // inside the deleted middle (inverted) triangle
            let m01 = [0.5, 0.0];
            let m02 = [0.25, SQRT3 / 4.0];
            let m12 = [0.75, SQRT3 / 4.0];
            let d = seg_distance(u, m01, m02)
                .min(seg_distance(u, m01, m12))
                .min(seg_distance(u, m02, m12));
            return Ok(scale * d);
        }
        scale *= 0.5;
    }
    Ok(0.0)
}

/// Distance to the 3-carpet (the 3D Sierpinski-carpet analog) in `[0,1]^3`.
pub fn carpet3_distance(p: [f64; 3], tol: f64) -> Result<f64> {
    let clamped = [p[0].clamp(0.0, 1.0), p[1].clamp(0.0, 1.0), p[2].clamp(0.0, 1.0)];
    if clamped != p {
        let dd: f64 = (0..3).map(|i| (p[i] - clamped[i]).powi(2)).sum();
        return Ok(dd.sqrt());
    }
    let depth = pruning_depth(SQRT3, tol, 1.0 / 3.0)?;
    let mut u = p;
    let mut scale = 1.0;
    for _ in 0..depth {
        let c = [
            (u[0] * 3.0).floor().clamp(0.0, 2.0),
            (u[1] * 3.0).floor().clamp(0.0, 2.0),
            (u[2] * 3.0).floor().clamp(0.0, 2.0),
        ];
        let mid = c.iter().all(|&ci| ci == 1.0);
        u = [u[0] * 3.0 - c[0], u[1] * 3.0 - c[1], u[2] * 3.0 - c[2]];
        scale /= 3.0;
        if mid {
            // inside the removed open cube; faces of that cube are set points
            let d = u
                .iter()
                .map(|&ui| ui.min(1.0 - ui))
                .fold(f64::INFINITY, f64::min);
            return Ok(scale * d);
        }
    }
    Ok(0.0)
}

/// Distance to the 1/2-square fractal in `[0,1]^2` (keep the two diagonal
/// half-squares, remove the two off-diagonal open half-squares).
pub fn half_square_distance(p: [f64; 2], tol: f64) -> Result<f64> {
    if let Some(d) = outside_unit_square(p) {
        return Ok(d);
    }
    let depth = pruning_depth(std::f64::consts::SQRT_2, tol, 0.5)?;
    let mut u = p;
    let mut scale = 1.0;
    for _ in 0..depth {
        let left = u[0] < 0.5;
        let low = u[1] < 0.5;
        if left && !low {
            // removed square (0,1/2) x (1/2,1)
            let d = u[0].min(0.5 - u[0]).min(u[1] - 0.5).min(1.0 - u[1]);
            return Ok(scale * d);
        }
        if !left && low {
            let d = (u[0] - 0.5).min(1.0 - u[0]).min(u[1]).min(0.5 - u[1]);
            return Ok(scale * d);
        }
        if left {
            u = [2.0 * u[0], 2.0 * u[1]];
        } else {
            u = [2.0 * u[0] - 1.0, 2.0 * u[1] - 1.0];
        }
        scale *= 0.5;
    }
    Ok(0.0)
}

/// The octagonal generator of the 1/3-square fractal: the unit square
/// minus the kept corner squares `[0,1/3]^2` and `[2/3,1]^2`.
pub const THIRD_SQUARE_GENERATOR: [[f64; 2]; 8] = [
    [1.0 / 3.0, 0.0],
    [1.0, 0.0],
    [1.0, 2.0 / 3.0],
    [2.0 / 3.0, 2.0 / 3.0],
    [2.0 / 3.0, 1.0],
    [0.0, 1.0],
    [0.0, 1.0 / 3.0],
    [1.0 / 3.0, 1.0 / 3.0],
];

fn third_square_generator_boundary_distance(u: [f64; 2]) -> f64 {
    let poly = &THIRD_SQUARE_GENERATOR;
    let mut d = f64::INFINITY;
    for i in 0..poly.len() {
        let j = (i + 1) % poly.len();
        d = d.min(seg_distance(u, poly[i], poly[j]));
    }
    d
}

/// Distance to the 1/3-square fractal in `[0,1]^2` (keep `[0,1/3]^2` and
/// `[2/3,1]^2`, remove the open octagon between them).
pub fn third_square_distance(p: [f64; 2], tol: f64) -> Result<f64> {
    if let Some(d) = outside_unit_square(p) {
        return Ok(d);
    }
    let depth = pruning_depth(std::f64::consts::SQRT_2, tol, 1.0 / 3.0)?;
    let mut u = p;
    let mut scale = 1.0;
    for _ in 0..depth {
        let third = 1.0 / 3.0;
        if u[0] <= third && u[1] <= third {
            u = [3.0 * u[0], 3.0 * u[1]];
        } else if u[0] >= 2.0 * third && u[1] >= 2.0 * third {
            u = [3.0 * u[0] - 2.0, 3.0 * u[1] - 2.0];
        } else {
            return Ok(scale * third_square_generator_boundary_distance(u));
        }
        scale /= 3.0;
    }
    Ok(0.0)
}

fn outside_unit_square(p: [f64; 2]) -> Option<f64> {
    let cx = p[0].clamp(0.0, 1.0);
    let cy = p[1].clamp(0.0, 1.0);
    if cx != p[0] || cy != p[1] {
        let dx = p[0] - cx;
        let dy = p[1] - cy;
        Some((dx * dx + dy * dy).sqrt())
    } else {
        None
    }
}

/// Distance to the fractal nest: concentric circles of radii `j^{-a}`.
pub fn nest_distance(p: [f64; 2], a: f64) -> f64 {
    let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
    if r >= 1.0 {
        return r - 1.0;
    }
    if r == 0.0 {
        // radii accumulate at the origin
        return 0.0;
    }
    // bracket r between a_{j+1} = (j+1)^{-a} and a_j = j^{-a}
    let mut j = r.powf(-1.0 / a).floor().max(1.0) as u64;
    while (j as f64).powf(-a) < r {
        j -= 1;
    }
    while ((j + 1) as f64).powf(-a) > r {
        j += 1;
    }
    let hi = (j as f64).powf(-a);
    let lo = ((j + 1) as f64).powf(-a);
    (hi - r).min(r - lo)
}

/// Distance to the unbounded geometric chirp: vertical segments at
/// `x_j = j^{-1/β}` of heights `j^{-α/β}`.
pub fn chirp_distance(p: [f64; 2], alpha: f64, beta: f64) -> f64 {
    let c = 1.0 / beta;
    if p[0] <= 0.0 {
        // segments accumulate on the y-axis with unbounded heights
        let dy = (-p[1]).max(0.0);
        return (p[0] * p[0] + dy * dy).sqrt();
    }
    let seg = |j: u64| -> f64 {
        let xj = (j as f64).powf(-c);
        let hj = (j as f64).powf(-alpha / beta);
        let dx = (p[0] - xj).abs();
        let dy = if p[1] < 0.0 {
            -p[1]
        } else if p[1] > hj {
            p[1] - hj
        } else {
            0.0
        };
        (dx * dx + dy * dy).sqrt()
    };
    // bracket p.x among the abscissae x_j = j^{-c}
    let mut j0 = p[0].powf(-1.0 / c).floor().max(1.0) as u64;
    while j0 > 1 && (j0 as f64).powf(-c) < p[0] {
        j0 -= 1;
    }
    let mut best = f64::INFINITY;
    // a segment tall enough to reach p.y, if heights must grow to meet it
    if alpha < 0.0 && p[1] > 1.0 {
        let j_tall = p[1].powf(beta / -alpha).ceil().max(1.0) as u64;
        best = best.min(seg(j_tall)).min(seg(j_tall + 1));
    }
    // scan right (decreasing j), pruning once the x-gap alone exceeds best
    let mut j = j0;
    loop {
        best = best.min(seg(j));
        if j == 1 {
            break;
        }
        let xj = ((j - 1) as f64).powf(-c);
        if xj - p[0] >= best {
            break;
        }
        j -= 1;
    }
    // scan left (increasing j)
    let mut j = j0 + 1;
    loop {
        let xj = (j as f64).powf(-c);
        if p[0] - xj >= best {
            break;
        }
        best = best.min(seg(j));
        j += 1;
    }
    best
}
