//! Scalar root finding and maximization.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Root of a nonincreasing function on `[lo, hi]` by bisection.
///
/// Returns the final bracket `(lo, hi)` with `g(lo) >= 0 >= g(hi)` maintained
/// whenever the signs at the endpoints allow it.
pub fn bisect_decreasing<G: Fn(f64) -> f64>(
    g: G,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    max_iter: usize,
) -> (f64, f64) {
    for _ in 0..max_iter {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Maximizes `h` on `[a, b]` by golden-section search.
///
/// The endpoints are always evaluated, so a maximum at the boundary is found
/// exactly. Returns `(argmax, max)`.
pub fn golden_max<H: FnMut(f64) -> f64>(mut h: H, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (mut best_x, mut best_v) = (a, h(a));
    let vb = h(b);
    if vb > best_v {
        best_x = b;
        best_v = vb;
    }
    if b - a <= tol {
        return (best_x, best_v);
    }
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut v1 = h(x1);
    let mut v2 = h(x2);
    while hi - lo > tol {
        if v1 >= v2 {
            hi = x2;
            x2 = x1;
            v2 = v1;
            x1 = hi - INV_PHI * (hi - lo);
            v1 = h(x1);
        } else {
            lo = x1;
            x1 = x2;
            v1 = v2;
            x2 = lo + INV_PHI * (hi - lo);
            v2 = h(x2);
        }
    }
    for (x, v) in [(x1, v1), (x2, v2)] {
        if v > best_v {
            best_x = x;
            best_v = v;
        }
    }
    (best_x, best_v)
}

/// `n` points evenly spaced on `[a, b]`, endpoints included.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|i| if i + 1 == n { b } else { a + (b - a) * (i as f64 / (n - 1) as f64) })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_hits_end_points() {
        let b = 24.184408905232498;
        let xs = linspace(0.0, b, 400);
        assert_eq!((xs[0], xs[399]), (0.0, b));
        assert!(xs.iter().all(|&x| x <= b));
    }

    #[test]
    fn bisect_finds_sqrt_two() {
        let (lo, hi) = bisect_decreasing(|x| 2.0 - x * x, 0.0, 2.0, 1e-14, 200);
        assert!((lo - std::f64::consts::SQRT_2).abs() < 1e-13);
        assert!(hi >= lo);
    }

    #[test]
    fn golden_interior_and_boundary() {
        let (x, v) = golden_max(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-8);
        assert!(v.abs() < 1e-15);
        let (x, _) = golden_max(|x| x, 0.0, 1.0, 1e-10);
        assert_eq!(x, 1.0);
    }

    #[test]
    fn linspace_endpoints() {
        let v = linspace(0.0, 20.0, 401);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[400], 20.0);
        assert!((v[1] - 0.05).abs() < 1e-15);
    }
}
