//! First-order dual numbers.
//!
//! Carries a value together with its derivative with respect to one scalar
//! parameter through arithmetic. Used to get exact derivatives of the
//! absorption-dependent model vectors with respect to the absorption
//! scaling factor, without hand-deriving the closed forms.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual {
    pub v: f64,
    pub d: f64,
}

impl Dual {
    pub const fn constant(v: f64) -> Self {
        Self { v, d: 0.0 }
    }

    /// The differentiation variable itself.
    pub const fn variable(v: f64) -> Self {
        Self { v, d: 1.0 }
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        Self {
            v: e,
            d: self.d * e,
        }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, rhs: Dual) -> Dual {
        Dual {
            v: self.v + rhs.v,
            d: self.d + rhs.d,
        }
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, rhs: Dual) -> Dual {
        Dual {
            v: self.v - rhs.v,
            d: self.d - rhs.d,
        }
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, rhs: Dual) -> Dual {
        Dual {
            v: self.v * rhs.v,
            d: self.d * rhs.v + self.v * rhs.d,
        }
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, rhs: Dual) -> Dual {
        Dual {
            v: self.v / rhs.v,
            d: (self.d * rhs.v - self.v * rhs.d) / (rhs.v * rhs.v),
        }
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual {
            v: -self.v,
            d: -self.d,
        }
    }
}

impl Mul<f64> for Dual {
    type Output = Dual;
    fn mul(self, rhs: f64) -> Dual {
        Dual {
            v: self.v * rhs,
            d: self.d * rhs,
        }
    }
}

impl Div<f64> for Dual {
    type Output = Dual;
    fn div(self, rhs: f64) -> Dual {
        Dual {
            v: self.v / rhs,
            d: self.d / rhs,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn chain_rule_against_finite_difference() {
        // f(a) = a * exp(-2a) / (1 + a)
        let f = |a: Dual| a * (-(a * 2.0)).exp() / (Dual::constant(1.0) + a);
        let a0 = 0.8;
        let h = 1e-6;
        let fd = (f(Dual::variable(a0 + h)).v - f(Dual::variable(a0 - h)).v) / (2.0 * h);
        let dual = f(Dual::variable(a0));
        assert_relative_eq!(dual.d, fd, max_relative = 1e-8);
    }
}
