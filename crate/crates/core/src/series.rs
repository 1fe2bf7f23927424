//! Truncated Laurent series in `z` with a tracked precision.

use crate::scalar::Scalar;

/// `Σ_{e=low}^{prec} c_e z^e + O(z^{prec+1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct Laurent<T> {
    low: i32,
    coeffs: Vec<T>,
    prec: i32,
}

impl<T: Scalar> Laurent<T> {
    /// Series with the given coefficients from `z^low` on, trusted through `z^prec`.
    pub fn new(low: i32, coeffs: Vec<T>, prec: i32) -> Self {
        let mut s = Laurent { low, coeffs, prec };
        s.clip();
        s
    }

    pub fn zero(prec: i32) -> Self {
        Laurent {
            low: 0,
            coeffs: Vec::new(),
            prec,
        }
    }

    fn clip(&mut self) {
        let keep = (self.prec - self.low + 1).max(0) as usize;
        self.coeffs.truncate(keep);
    }

    pub fn prec(&self) -> i32 {
        self.prec
    }

    pub fn low(&self) -> i32 {
        self.low
    }

    pub fn coeff(&self, e: i32) -> T {
        if e < self.low {
            return T::zero();
        }
        self.coeffs
            .get((e - self.low) as usize)
            .cloned()
            .unwrap_or_else(T::zero)
    }

    /// `(exponent, coefficient)` pairs through the trusted order.
    pub fn iter(&self) -> impl Iterator<Item = (i32, &T)> {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, c)| (self.low + i as i32, c))
    }

    fn combine(&self, other: &Self, sign: bool) -> Self {
        let low = self.low.min(other.low);
        let prec = self.prec.min(other.prec);
        let coeffs = (low..=prec)
            .map(|e| {
                if sign {
                    self.coeff(e) + other.coeff(e)
                } else {
                    self.coeff(e) - other.coeff(e)
                }
            })
            .collect();
        Laurent::new(low, coeffs, prec)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let low = self.low + other.low;
        let prec = (self.low + other.prec).min(other.low + self.prec);
        let mut coeffs = vec![T::zero(); (prec - low + 1).max(0) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                if let Some(slot) = coeffs.get_mut(i + j) {
                    *slot = slot.clone() + a.clone() * b.clone();
                }
            }
        }
        Laurent::new(low, coeffs, prec)
    }

    pub fn scale(&self, c: &T) -> Self {
        Laurent {
            low: self.low,
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
            prec: self.prec,
        }
    }

    /// `d/dz`.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .iter()
            .map(|(e, c)| T::from_int(e as i64) * c.clone())
            .collect();
        Laurent {
            low: self.low - 1,
            coeffs,
            prec: self.prec - 1,
        }
    }

    /// Largest coefficient magnitude among exponents `≤ upto`.
    pub fn max_magnitude(&self, upto: i32) -> f64 {
        self.iter()
            .filter(|(e, _)| *e <= upto)
            .map(|(_, c)| c.magnitude())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_tracks_precision() {
        // (1/z + z + O(z^3)) · (1 + z^2 + O(z^4))
        let a = Laurent::new(-1, vec![1.0, 0.0, 1.0, 0.0], 2);
        let b = Laurent::new(0, vec![1.0, 0.0, 1.0, 0.0], 3);
        let p = a.mul(&b);
        assert_eq!(p.prec(), 2);
        assert_eq!(p.coeff(-1), 1.0);
        assert_eq!(p.coeff(1), 2.0);
        assert_eq!(p.coeff(3), 0.0);
    }

    #[test]
    fn derivative_of_pole() {
        let a = Laurent::new(-1, vec![2.0, 0.0, 3.0], 1);
        let d = a.derivative();
        assert_eq!(d.low(), -2);
        assert_eq!(d.coeff(-2), -2.0);
        assert_eq!(d.coeff(0), 3.0);
        assert_eq!(d.prec(), 0);
    }

    #[test]
    fn add_and_sub() {
        let a = Laurent::new(0, vec![1.0, 2.0], 1);
        let b = Laurent::new(-1, vec![5.0, 1.0, 1.0, 1.0], 2);
        let s = a.add(&b);
        assert_eq!(s.prec(), 1);
        assert_eq!(s.coeff(-1), 5.0);
        assert_eq!(s.coeff(1), 3.0);
        assert!(a.sub(&a).max_magnitude(10) == 0.0);
    }
}
