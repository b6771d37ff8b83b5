//! Independent oracles shared by the integration tests and the acceptance
//! runner.

#![allow(dead_code)]

use num_bigint::{BigInt, Sign};
use num_traits::{Float, One, Signed, ToPrimitive, Zero};

use emergence::traffic::{Boundary, Controller, Dir, GridConfig, TrafficGrid};

/// Decimal digits carried by the fixed-point oracle.
const DIGITS: u32 = 60;

fn scale() -> BigInt {
    BigInt::from(10u8).pow(DIGITS)
}

/// Fixed-point real `value / 10^DIGITS`.
#[derive(Debug, Clone, PartialEq)]
pub struct Fixed(BigInt);

impl Fixed {
    /// Exact conversion of a finite `f64` (truncated at the last digit).
    pub fn from_f64(x: f64) -> Self {
        let (mantissa, exp, sign) = Float::integer_decode(x);
        let mut v = BigInt::from(mantissa) * scale();
        if exp >= 0 {
            v <<= exp as usize;
        } else {
            v >>= (-exp) as usize;
        }
        if sign < 0 {
            v = -v;
        }
        Fixed(v)
    }

    pub fn int(n: i64) -> Self {
        Fixed(BigInt::from(n) * scale())
    }

    pub fn to_f64(&self) -> f64 {
        let s = scale();
        let whole = &self.0 / &s;
        let frac = &self.0 % &s;
        whole.to_f64().unwrap() + frac.to_f64().unwrap() / s.to_f64().unwrap()
    }

    fn add(&self, o: &Self) -> Self {
        Fixed(&self.0 + &o.0)
    }

    fn sub(&self, o: &Self) -> Self {
        Fixed(&self.0 - &o.0)
    }

    fn mul(&self, o: &Self) -> Self {
        Fixed(&self.0 * &o.0 / scale())
    }

    fn div(&self, o: &Self) -> Option<Self> {
        (!o.0.is_zero()).then(|| Fixed(&self.0 * scale() / &o.0))
    }

    fn sqrt(&self) -> Option<Self> {
        (self.0.sign() != Sign::Minus).then(|| Fixed((&self.0 * scale()).sqrt()))
    }

    pub fn abs(&self) -> Self {
        Fixed(self.0.abs())
    }

    pub fn is_one(&self) -> bool {
        (&self.0 / scale()).is_one() && (&self.0 % scale()).is_zero()
    }
}

/// Expression tree over the three inputs.
#[derive(Debug, Clone)]
pub enum Expr {
    S,
    A,
    H,
    Int(i64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Sqrt(Box<Expr>),
}

fn b(e: Expr) -> Box<Expr> {
    Box::new(e)
}

pub fn add(x: Expr, y: Expr) -> Expr {
    Expr::Add(b(x), b(y))
}
pub fn sub(x: Expr, y: Expr) -> Expr {
    Expr::Sub(b(x), b(y))
}
pub fn mul(x: Expr, y: Expr) -> Expr {
    Expr::Mul(b(x), b(y))
}
pub fn div(x: Expr, y: Expr) -> Expr {
    Expr::Div(b(x), b(y))
}
pub fn sqrt(x: Expr) -> Expr {
    Expr::Sqrt(b(x))
}

impl Expr {
    /// `None` on division by zero or a negative radicand anywhere in the tree.
    pub fn eval(&self, s: &Fixed, a: &Fixed, h: &Fixed) -> Option<Fixed> {
        Some(match self {
            Expr::S => s.clone(),
            Expr::A => a.clone(),
            Expr::H => h.clone(),
            Expr::Int(n) => Fixed::int(*n),
            Expr::Add(x, y) => x.eval(s, a, h)?.add(&y.eval(s, a, h)?),
            Expr::Sub(x, y) => x.eval(s, a, h)?.sub(&y.eval(s, a, h)?),
            Expr::Mul(x, y) => x.eval(s, a, h)?.mul(&y.eval(s, a, h)?),
            Expr::Div(x, y) => x.eval(s, a, h)?.div(&y.eval(s, a, h)?)?,
            Expr::Sqrt(x) => x.eval(s, a, h)?.sqrt()?,
        })
    }

    /// Smallest radicand met during evaluation, for conditioning checks.
    pub fn min_radicand(&self, s: &Fixed, a: &Fixed, h: &Fixed) -> Option<f64> {
        let here = match self {
            Expr::Sqrt(x) => Some(x.eval(s, a, h)?.to_f64()),
            _ => None,
        };
        let kids: Vec<&Expr> = match self {
            Expr::Add(x, y) | Expr::Sub(x, y) | Expr::Mul(x, y) | Expr::Div(x, y) => vec![x, y],
            Expr::Sqrt(x) => vec![x],
            _ => vec![],
        };
        let mut best = here;
        for k in kids {
            if let Some(m) = k.min_radicand(s, a, h) {
                best = Some(best.map_or(m, |b: f64| b.min(m)));
            }
        }
        best
    }
}

/// Biomass: √(1 − H²A(H − S)/S − A⁴SH − √(S(S + H))).
pub fn biomass_expr() -> Expr {
    use Expr::*;
    let h2 = mul(H, H);
    let t1 = div(mul(mul(h2, A), sub(H, S)), S);
    let a4 = mul(mul(A, A), mul(A, A));
    let t2 = mul(mul(a4, S), H);
    let t3 = sqrt(mul(S, add(S, H)));
    sqrt(sub(sub(sub(Int(1), t1), t2), t3))
}

/// Limiting nutrients: √(((SH + A/S) − (S(A + S) − 1)) / (1 − S)).
pub fn nutrients_expr() -> Expr {
    use Expr::*;
    let left = add(mul(S, H), div(A, S));
    let right = sub(mul(S, add(A, S)), Int(1));
    sqrt(div(sub(left, right), sub(Int(1), S)))
}

/// Physico-chemical: √((A − H − S − A/H) − S²·√(A/H + A + 2H)/√(A/H)).
pub fn physchem_expr() -> Expr {
    use Expr::*;
    let lead = sub(sub(sub(A, H), S), div(A, H));
    let top = sqrt(add(add(div(A, H), A), mul(Int(2), H)));
    let bottom = sqrt(div(A, H));
    sqrt(sub(lead, mul(mul(S, S), div(top, bottom))))
}

/// Class of `x` on `classes` bins between integer bounds, by exact integer
/// arithmetic, clamped into `0..classes`.
pub fn class_oracle(x: i64, classes: i64, min: i64, max: i64) -> u32 {
    let k = (classes * (x - min)).div_euclid(max - min);
    k.clamp(0, classes - 1) as u32
}

/// One rule-184 step on a ring of booleans.
pub fn rule_184(ring: &[bool]) -> Vec<bool> {
    let n = ring.len();
    (0..n)
        .map(|i| {
            let (l, c, r) = (ring[(i + n - 1) % n], ring[i], ring[(i + 1) % n]);
            (c && r) || (l && !c)
        })
        .collect()
}

/// Horizontal streets threaded into one ring, in driving order.
pub fn threaded_ring(grid: &TrafficGrid) -> Vec<bool> {
    let n_h = grid.config().n_h;
    (0..n_h)
        .flat_map(|k| grid.street_occupancy(Dir::H, k).unwrap())
        .collect()
}

/// Grid whose horizontal streets form a single ring under a permanent
/// horizontal green, loaded with horizontal vehicles only.
pub fn rule_184_grid(n: usize, block_len: usize, occupancy: &[bool]) -> TrafficGrid {
    let cfg = GridConfig {
        n_h: n,
        n_v: n,
        block_len,
        density: 0.0,
        boundary: Boundary::Helical,
        controller: Controller::Fixed { green: Dir::H },
    };
    let mut grid = TrafficGrid::empty(cfg).unwrap();
    let len = n * block_len;
    for (i, &occ) in occupancy.iter().enumerate() {
        if occ {
            grid.place_vehicle(Dir::H, i / len, i % len).unwrap();
        }
    }
    grid
}
