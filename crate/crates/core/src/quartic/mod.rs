//! Ternary quartic forms with integer coefficients.

mod twist;

pub use twist::{
    twist_from_cubic, twist_matrix_check, twist_with_scalars, CaseScalars, MatrixCheck,
};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::mod_floor_u64;
use crate::projective::ProjectivePoints;
use crate::{Error, Result};

/// The 15 exponent triples of degree 4, lexicographically descending.
pub const MONOMIALS: [[u32; 3]; 15] = [
    [4, 0, 0],
    [3, 1, 0],
    [3, 0, 1],
    [2, 2, 0],
    [2, 1, 1],
    [2, 0, 2],
    [1, 3, 0],
    [1, 2, 1],
    [1, 1, 2],
    [1, 0, 3],
    [0, 4, 0],
    [0, 3, 1],
    [0, 2, 2],
    [0, 1, 3],
    [0, 0, 4],
];

/// Position of `x^i y^j z^k` in [`MONOMIALS`].
pub fn monomial_index(i: u32, j: u32, k: u32) -> Option<usize> {
    MONOMIALS.iter().position(|m| *m == [i, j, k])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuarticForm {
    coeffs: [BigInt; 15],
    label: String,
}

fn pow_table(v: &BigInt) -> [BigInt; 5] {
    let mut t: [BigInt; 5] = Default::default();
    t[0] = BigInt::one();
    for e in 1..5 {
        t[e] = &t[e - 1] * v;
    }
    t
}

impl QuarticForm {
    pub fn new(coeffs: [BigInt; 15], label: impl Into<String>) -> Result<Self> {
        if coeffs.iter().all(Zero::is_zero) {
            return Err(Error::UndefinedInput(
                "quartic form is identically zero".into(),
            ));
        }
        Ok(QuarticForm {
            coeffs,
            label: label.into(),
        })
    }

    /// Builds a form from `(i, j, k, coefficient)` terms; repeated monomials add up.
    pub fn from_terms(terms: &[(u32, u32, u32, i64)], label: impl Into<String>) -> Result<Self> {
        let mut coeffs: [BigInt; 15] = Default::default();
        for &(i, j, k, c) in terms {
            let idx = monomial_index(i, j, k).ok_or_else(|| {
                Error::InvalidArgument(format!("x^{i}*y^{j}*z^{k} is not of degree 4"))
            })?;
            coeffs[idx] += c;
        }
        QuarticForm::new(coeffs, label)
    }

    pub fn coefficients(&self) -> &[BigInt; 15] {
        &self.coeffs
    }

    pub fn coefficient(&self, i: u32, j: u32, k: u32) -> BigInt {
        monomial_index(i, j, k).map_or_else(BigInt::zero, |idx| self.coeffs[idx].clone())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// `F(P)`, reduced into `[0, m)` when a modulus is given.
    pub fn evaluate(&self, point: &[BigInt; 3], modulus: Option<&BigInt>) -> BigInt {
        let [px, py, pz] = point.each_ref().map(pow_table);
        let mut acc = BigInt::zero();
        for (c, [i, j, k]) in self.coeffs.iter().zip(MONOMIALS) {
            if !c.is_zero() {
                acc += c * &px[i as usize] * &py[j as usize] * &pz[k as usize];
            }
        }
        match modulus {
            Some(m) => acc.mod_floor(m),
            None => acc,
        }
    }

    /// `(∂F/∂x, ∂F/∂y, ∂F/∂z)` at `P`.
    pub fn gradient(&self, point: &[BigInt; 3], modulus: Option<&BigInt>) -> [BigInt; 3] {
        let pw = point.each_ref().map(pow_table);
        let mut grad: [BigInt; 3] = Default::default();
        for (c, e) in self.coeffs.iter().zip(MONOMIALS) {
            if c.is_zero() {
                continue;
            }
            for (var, g) in grad.iter_mut().enumerate() {
                if e[var] == 0 {
                    continue;
                }
                let mut term = c * BigInt::from(e[var]);
                for (w, table) in pw.iter().enumerate() {
                    let exp = if w == var { e[w] - 1 } else { e[w] };
                    term *= &table[exp as usize];
                }
                *g += term;
            }
        }
        if let Some(m) = modulus {
            for g in grad.iter_mut() {
                *g = g.mod_floor(m);
            }
        }
        grad
    }

    pub fn reduce_mod(&self, m: u64) -> ModularQuartic {
        assert!(m >= 2, "modulus must be at least 2");
        ModularQuartic {
            modulus: m,
            coeffs: self.coeffs.each_ref().map(|c| mod_floor_u64(c, m)),
        }
    }

    /// `G(x, y, z) = F(y, z, x)`.
    pub fn rotate(&self) -> QuarticForm {
        let mut coeffs: [BigInt; 15] = Default::default();
        for (idx, [i, j, k]) in MONOMIALS.iter().enumerate() {
            coeffs[idx] = self.coefficient(*k, *i, *j);
        }
        QuarticForm {
            coeffs,
            label: self.label.clone(),
        }
    }

    /// `G(x, y, z) = F(−x, y, z)`.
    pub fn negate_x(&self) -> QuarticForm {
        let mut out = self.clone();
        for (c, [i, _, _]) in out.coeffs.iter_mut().zip(MONOMIALS) {
            if i % 2 == 1 {
                *c = -&*c;
            }
        }
        out
    }

    /// Greatest common divisor of the coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn is_smooth_mod_p(&self, p: u64) -> bool {
        self.reduce_mod(p).singular_point().is_none()
    }

    /// `coeff*x^i*y^j*z^k` terms joined by ` + `, zero terms omitted.
    pub fn to_text(&self) -> String {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .zip(MONOMIALS)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, [i, j, k])| format!("{c}*x^{i}*y^{j}*z^{k}"))
            .collect();
        terms.join(" + ")
    }

    /// JSON array of the 15 coefficients in monomial order.
    pub fn to_json_array(&self) -> String {
        let parts: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        format!("[{}]", parts.join(", "))
    }

    /// Klein quartic `x³y + y³z + z³x`.
    pub fn klein() -> QuarticForm {
        QuarticForm::from_terms(&[(3, 1, 0, 1), (0, 3, 1, 1), (1, 0, 3, 1)], "Klein quartic")
            .expect("nonzero form")
    }

    /// `x⁴+y⁴+z⁴ + 6(xy³+yz³+zx³) − 3(x²y²+y²z²+z²x²) + 3xyz(x+y+z)`.
    pub fn c_zero() -> QuarticForm {
        QuarticForm::from_terms(
            &[
                (4, 0, 0, 1),
                (0, 4, 0, 1),
                (0, 0, 4, 1),
                (1, 3, 0, 6),
                (0, 1, 3, 6),
                (3, 0, 1, 6),
                (2, 2, 0, -3),
                (0, 2, 2, -3),
                (2, 0, 2, -3),
                (2, 1, 1, 3),
                (1, 2, 1, 3),
                (1, 1, 2, 3),
            ],
            "C0",
        )
        .expect("nonzero form")
    }
}

impl fmt::Display for QuarticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for QuarticForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut coeffs: [BigInt; 15] = Default::default();
        for term in s.split(" + ").map(str::trim).filter(|t| !t.is_empty()) {
            let bad = || Error::Parse(format!("bad quartic term `{term}`"));
            let mut parts = term.split('*');
            let c: BigInt = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let mut e = [0u32; 3];
            for part in parts {
                let (var, exp) = part.split_once('^').ok_or_else(bad)?;
                let slot = match var {
                    "x" => 0,
                    "y" => 1,
                    "z" => 2,
                    _ => return Err(bad()),
                };
                e[slot] += exp.parse::<u32>().map_err(|_| bad())?;
            }
            let idx = monomial_index(e[0], e[1], e[2]).ok_or_else(bad)?;
            coeffs[idx] += c;
        }
        QuarticForm::new(coeffs, "parsed")
    }
}

/// A quartic form with coefficients reduced into `[0, m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularQuartic {
    pub modulus: u64,
    pub coeffs: [u64; 15],
}

#[inline]
fn mulm(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powers(v: u64, m: u64) -> [u64; 5] {
    let mut t = [1 % m; 5];
    for e in 1..5 {
        t[e] = mulm(t[e - 1], v % m, m);
    }
    t
}

impl ModularQuartic {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn coefficient(&self, i: u32, j: u32, k: u32) -> u64 {
        monomial_index(i, j, k).map_or(0, |idx| self.coeffs[idx])
    }

    pub fn eval(&self, pt: [u64; 3]) -> u64 {
        let m = self.modulus;
        let [px, py, pz] = pt.map(|v| powers(v, m));
        let mut acc: u128 = 0;
        for (&c, [i, j, k]) in self.coeffs.iter().zip(MONOMIALS) {
            if c != 0 {
                let t = mulm(
                    mulm(c, px[i as usize], m),
                    mulm(py[j as usize], pz[k as usize], m),
                    m,
                );
                acc += t as u128;
            }
        }
        (acc % m as u128) as u64
    }

    pub fn gradient(&self, pt: [u64; 3]) -> [u64; 3] {
        let m = self.modulus;
        let pw = pt.map(|v| powers(v, m));
        let mut grad = [0u128; 3];
        for (&c, e) in self.coeffs.iter().zip(MONOMIALS) {
            if c == 0 {
                continue;
            }
            for (var, g) in grad.iter_mut().enumerate() {
                if e[var] == 0 {
                    continue;
                }
                let mut term = mulm(c, e[var] as u64 % m, m);
                for (w, table) in pw.iter().enumerate() {
                    let exp = if w == var { e[w] - 1 } else { e[w] };
                    term = mulm(term, table[exp as usize], m);
                }
                *g += term as u128;
            }
        }
        grad.map(|g| (g % m as u128) as u64)
    }

    /// First point of P²(𝔽_p), in enumeration order, where the form and its gradient vanish.
    pub fn singular_point(&self) -> Option<[u64; 3]> {
        ProjectivePoints::new(self.modulus)
            .find(|&pt| self.eval(pt) == 0 && self.gradient(pt) == [0, 0, 0])
    }

    /// Univariate coefficients (constant first) of `F(x, y, z)` as a polynomial in `x`.
    pub fn in_x(&self, y: u64, z: u64) -> [u64; 5] {
        let m = self.modulus;
        let (py, pz) = (powers(y, m), powers(z, m));
        let mut out = [0u64; 5];
        for (&c, [i, j, k]) in self.coeffs.iter().zip(MONOMIALS) {
            if c != 0 {
                let t = mulm(c, mulm(py[j as usize], pz[k as usize], m), m);
                out[i as usize] = (out[i as usize] + t) % m;
            }
        }
        out
    }
}
