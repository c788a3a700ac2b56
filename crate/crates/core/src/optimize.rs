//! One-dimensional maximisation helpers.

/// `(sqrt(5) - 1) / 2`
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// `count` points spaced evenly in `log(x)` from `lo` to `hi`, both included.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && count >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| {
            if i + 1 == count {
                hi
            } else {
                (a + (b - a) * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect()
}

/// `count` evenly spaced points from `lo` to `hi`, both included.
pub fn linear_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2);
    (0..count)
        .map(|i| {
            if i + 1 == count {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (count - 1) as f64
            }
        })
        .collect()
}

/// Golden-section search for a local maximum of `f` on `[lo, hi]`.
///
/// Stops once the bracket is narrower than `x_tol` or after `max_iter`
/// shrink steps. Returns the best point evaluated.
pub fn golden_section_max<F>(mut f: F, lo: f64, hi: f64, x_tol: f64, max_iter: usize) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iter = 0;
    while b - a > x_tol && iter < max_iter {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        iter += 1;
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Bisection on a predicate that is `false` at `lo` and `true` at `hi`.
/// Returns the final `(lo, hi)` bracket.
pub fn bisect_predicate<P>(mut pred: P, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64)
where
    P: FnMut(f64) -> bool,
{
    while (hi - lo).abs() > tol {
        let mid = 0.5 * (lo + hi);
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_peak() {
        let (x, fx) = golden_section_max(|x| -(x - 0.3).powi(2) + 2.0, 0.0, 1.0, 1e-10, 200);
        assert!((x - 0.3).abs() < 1e-6);
        assert!((fx - 2.0).abs() < 1e-14);
    }

    #[test]
    fn golden_handles_boundary_peak() {
        let (x, _) = golden_section_max(|x| x, 0.0, 1.0, 1e-10, 200);
        assert!(x > 1.0 - 1e-9);
    }

    #[test]
    fn grids_hit_endpoints() {
        let g = log_grid(1e-4, 1.0, 512);
        assert_eq!(g.len(), 512);
        assert_eq!(g[511], 1.0);
        assert!((g[0] - 1e-4).abs() < 1e-18);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        let l = linear_grid(0.0, 0.5, 101);
        assert_eq!(l[100], 0.5);
        assert!((l[50] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn bisection_brackets_root() {
        let (lo, hi) = bisect_predicate(|x| x * x > 2.0, 0.0, 2.0, 1e-12);
        assert!(lo <= 2f64.sqrt() && 2f64.sqrt() <= hi);
    }
}
