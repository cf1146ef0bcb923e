//! Second-order forward-mode derivatives.
//!
//! A [`Jet`] carries a value together with its first and second derivative
//! with respect to a single scalar parameter (here: the Laplace frequency
//! omega, or the counting variable s). Propagating jets through the series
//! and kernel formulas gives machine-accurate derivatives at omega = 0
//! without one-sided finite differencing, which is what the hitting-time
//! and execution-time moments are built from.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub const ZERO: Jet = Jet {
        v: 0.0,
        d1: 0.0,
        d2: 0.0,
    };

    /// A constant (zero derivatives).
    pub fn c(v: f64) -> Jet {
        Jet { v, d1: 0.0, d2: 0.0 }
    }

    /// The differentiation variable itself.
    pub fn var(v: f64) -> Jet {
        Jet { v, d1: 1.0, d2: 0.0 }
    }

    pub fn exp(self) -> Jet {
        let e = self.v.exp();
        Jet {
            v: e,
            d1: self.d1 * e,
            d2: (self.d2 + self.d1 * self.d1) * e,
        }
    }

    pub fn sqrt(self) -> Jet {
        let s = self.v.sqrt();
        Jet {
            v: s,
            d1: self.d1 / (2.0 * s),
            d2: self.d2 / (2.0 * s) - self.d1 * self.d1 / (4.0 * s * self.v),
        }
    }

    pub fn recip(self) -> Jet {
        let r = 1.0 / self.v;
        Jet {
            v: r,
            d1: -self.d1 * r * r,
            d2: (2.0 * self.d1 * self.d1 * r - self.d2) * r * r,
        }
    }

    /// Largest absolute component; used for truncation bounds.
    pub fn norm(self) -> f64 {
        self.v.abs().max(self.d1.abs()).max(self.d2.abs())
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet {
            v: self.v + o.v,
            d1: self.d1 + o.d1,
            d2: self.d2 + o.d2,
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet {
            v: self.v - o.v,
            d1: self.d1 - o.d1,
            d2: self.d2 - o.d2,
        }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet {
            v: self.v * o.v,
            d1: self.d1 * o.v + self.v * o.d1,
            d2: self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet {
            v: -self.v,
            d1: -self.d1,
            d2: -self.d2,
        }
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, k: f64) -> Jet {
        Jet {
            v: self.v * k,
            d1: self.d1 * k,
            d2: self.d2 * k,
        }
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, k: f64) -> Jet {
        Jet {
            v: self.v + k,
            ..self
        }
    }
}
