//! Monotone cubic (Fritsch-Carlson / PCHIP) interpolation on a 1-D grid.
//!
//! Used by the tabulate-and-interpolate acceleration of the interference
//! Laplace transforms. Evaluation outside the grid extrapolates linearly
//! with the boundary slope, which is safe for the tabulated quantities: they
//! are asymptotically linear in the tabulated coordinates at both ends.

use num_traits::Float;

#[derive(Debug, Clone)]
pub struct Pchip<T> {
    x: Vec<T>,
    y: Vec<T>,
    d: Vec<T>,
}

impl<T: Float> Pchip<T> {
    /// Build the interpolant. `x` must be strictly increasing with
    /// `x.len() == y.len() >= 2`.
    pub fn new(x: Vec<T>, y: Vec<T>) -> Self {
        assert_eq!(x.len(), y.len());
        assert!(x.len() >= 2);
        let n = x.len();
        let mut h = Vec::with_capacity(n - 1);
        let mut delta = Vec::with_capacity(n - 1);
        for i in 0..n - 1 {
            let hi = x[i + 1] - x[i];
            assert!(hi > T::zero(), "abscissae must be strictly increasing");
            h.push(hi);
            delta.push((y[i + 1] - y[i]) / hi);
        }

        let mut d = vec![T::zero(); n];
        if n == 2 {
            d[0] = delta[0];
            d[1] = delta[0];
        } else {
            for i in 1..n - 1 {
                if delta[i - 1] * delta[i] <= T::zero() {
                    d[i] = T::zero();
                } else {
                    // weighted harmonic mean preserving monotonicity
                    let w1 = T::from(2.0).unwrap() * h[i] + h[i - 1];
                    let w2 = h[i] + T::from(2.0).unwrap() * h[i - 1];
                    d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
                }
            }
            d[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
            d[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }

        Self { x, y, d }
    }

    pub fn eval(&self, xq: T) -> T {
        let n = self.x.len();
        if xq <= self.x[0] {
            return self.y[0] + self.d[0] * (xq - self.x[0]);
        }
        if xq >= self.x[n - 1] {
            return self.y[n - 1] + self.d[n - 1] * (xq - self.x[n - 1]);
        }
        // binary search for the bracketing interval
        let mut lo = 0usize;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.x[mid] <= xq {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let h = self.x[lo + 1] - self.x[lo];
        let t = (xq - self.x[lo]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let two = T::from(2.0).unwrap();
        let three = T::from(3.0).unwrap();
        let h00 = two * t3 - three * t2 + T::one();
        let h10 = t3 - two * t2 + t;
        let h01 = -two * t3 + three * t2;
        let h11 = t3 - t2;
        h00 * self.y[lo] + h10 * h * self.d[lo] + h01 * self.y[lo + 1] + h11 * h * self.d[lo + 1]
    }
}

// Three-point end-slope estimate, clipped per Fritsch-Carlson.
fn edge_slope<T: Float>(h0: T, h1: T, d0: T, d1: T) -> T {
    let s = ((T::from(2.0).unwrap() * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if s * d0 <= T::zero() {
        T::zero()
    } else if d0 * d1 <= T::zero() && s.abs() > T::from(3.0).unwrap() * d0.abs() {
        T::from(3.0).unwrap() * d0
    } else {
        s
    }
}
