//! Breadth-first lifting tree for ℚ_p-points on a plane quartic.
//!
//! Every primitive triple lies in exactly one chart `(1, u₁, u₂)`,
//! `(p·u₁, 1, u₂)` or `(p·u₁, p·u₂, 1)` with `u ∈ ℤ_p²`. A node is a box
//! `coordinate = base + p^s·u` together with `G(u) = F(point(u)) / p^e`, where
//! `e` is the exact `p`-content. The children of a node are the residues
//! `r mod p` with `G(r) ≡ 0`, re-expanded as `G(r + p·v) / p^c`. A level with
//! no residue left proves that `F` has no ℚ_p-point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{LocalStatus, LocalVerdict, Place, Witness};
use crate::arith::mod_floor_u64;
use crate::quartic::{QuarticForm, MONOMIALS};
use crate::{Error, Result};

pub const DEFAULT_DEPTH_CAP: u32 = 40;

const MAX_LEVEL_NODES: usize = 1 << 16;
const MAX_WORK: u64 = 1 << 33;
const REFINE_STEPS: u32 = 12;

/// Bivariate polynomial of degree ≤ 4 in each variable; `[a][b]` is the
/// coefficient of `u₁^a u₂^b`.
type BiPoly = [[BigInt; 5]; 5];

#[derive(Debug, Clone)]
struct Node {
    /// Coordinate pinned to 1.
    pin: usize,
    base: [BigInt; 2],
    scale: [u32; 2],
    g: BiPoly,
    e: u32,
}

fn free_coordinates(pin: usize) -> [usize; 2] {
    match pin {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    }
}

impl Node {
    fn point(&self, u: [&BigInt; 2], p: &BigInt) -> [BigInt; 3] {
        let mut pt: [BigInt; 3] = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
        pt[self.pin] = BigInt::one();
        for (slot, coord) in free_coordinates(self.pin).into_iter().enumerate() {
            pt[coord] = &self.base[slot] + p.pow(self.scale[slot]) * u[slot];
        }
        pt
    }
}

fn valuation_of(n: &BigInt, p: &BigInt) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let mut k = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return Some(k);
        }
        m = q;
        k += 1;
    }
}

/// Divides out the `p`-content; `None` for the zero polynomial.
fn strip_content(g: &mut BiPoly, p: &BigInt) -> Option<u32> {
    let c = g
        .iter()
        .flatten()
        .filter_map(|v| valuation_of(v, p))
        .min()?;
    if c > 0 {
        let pc = p.pow(c);
        for v in g.iter_mut().flatten() {
            *v = &*v / &pc;
        }
    }
    Some(c)
}

fn root_node(form: &QuarticForm, pin: usize, p: &BigInt) -> Option<Node> {
    let mut g: BiPoly = Default::default();
    for (c, e) in form.coefficients().iter().zip(MONOMIALS) {
        if c.is_zero() {
            continue;
        }
        let (a, b, shift) = match pin {
            0 => (e[1], e[2], 0),
            1 => (e[0], e[2], e[0]),
            _ => (e[0], e[1], e[0] + e[1]),
        };
        g[a as usize][b as usize] += c * p.pow(shift);
    }
    let e = strip_content(&mut g, p)?;
    let scale = match pin {
        0 => [0, 0],
        1 => [1, 0],
        _ => [1, 1],
    };
    Some(Node {
        pin,
        base: [BigInt::zero(), BigInt::zero()],
        scale,
        g,
        e,
    })
}

/// Coefficients of `(r + p·v)^k` in `v`, for `k = 0..=4`.
fn shifted_powers(r: &BigInt, p: &BigInt) -> [[BigInt; 5]; 5] {
    let mut out: [[BigInt; 5]; 5] = Default::default();
    out[0][0] = BigInt::one();
    for k in 1..5 {
        for i in 0..=k {
            let mut v = &out[k - 1][i] * r;
            if i > 0 {
                v += &out[k - 1][i - 1] * p;
            }
            out[k][i] = v;
        }
    }
    out
}

fn child(node: &Node, r: [u64; 2], p: &BigInt) -> Option<Node> {
    let r = r.map(BigInt::from);
    let p1 = shifted_powers(&r[0], p);
    let p2 = shifted_powers(&r[1], p);
    let mut g: BiPoly = Default::default();
    for a in 0..5 {
        for b in 0..5 {
            let c = &node.g[a][b];
            if c.is_zero() {
                continue;
            }
            for i in 0..=a {
                if p1[a][i].is_zero() {
                    continue;
                }
                let ci = c * &p1[a][i];
                for j in 0..=b {
                    if !p2[b][j].is_zero() {
                        g[i][j] += &ci * &p2[b][j];
                    }
                }
            }
        }
    }
    let c = strip_content(&mut g, p)?;
    let base = [
        &node.base[0] + p.pow(node.scale[0]) * &r[0],
        &node.base[1] + p.pow(node.scale[1]) * &r[1],
    ];
    Some(Node {
        pin: node.pin,
        base,
        scale: [node.scale[0] + 1, node.scale[1] + 1],
        g,
        e: node.e + c,
    })
}

#[inline]
fn mulm(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn eval_bi(g: &BiPoly, u: [&BigInt; 2]) -> BigInt {
    let mut acc = BigInt::zero();
    for a in (0..5).rev() {
        let mut row = BigInt::zero();
        for b in (0..5).rev() {
            row = row * u[1] + &g[a][b];
        }
        acc = acc * u[0] + row;
    }
    acc
}

fn partial_bi(g: &BiPoly, var: usize) -> BiPoly {
    let mut d: BiPoly = Default::default();
    for a in 0..5usize {
        for b in 0..5usize {
            let (e, ta, tb) = if var == 0 {
                (a, a.wrapping_sub(1), b)
            } else {
                (b, a, b.wrapping_sub(1))
            };
            if e > 0 {
                d[ta][tb] = &g[a][b] * BigInt::from(e);
            }
        }
    }
    d
}

/// Values of a degree ≤ 4 polynomial at `0, 1, …, p − 1` by forward differences.
fn values_mod(h: &[u64; 5], p: u64) -> impl Iterator<Item = u64> {
    let eval = |x: u64| {
        h.iter()
            .rev()
            .fold(0u64, |acc, &c| (mulm(acc, x % p, p) + c) % p)
    };
    let mut d = [0u64; 5];
    let samples: Vec<u64> = (0..5).map(eval).collect();
    // d[k] = k-th forward difference at 0
    let mut row = samples;
    for slot in d.iter_mut() {
        *slot = row[0];
        row = row.windows(2).map(|w| (w[1] + p - w[0]) % p).collect();
    }
    (0..p).map(move |_| {
        let out = d[0];
        for k in 0..4 {
            d[k] = (d[k] + d[k + 1]) % p;
        }
        out
    })
}

/// Literal multivariate Hensel criterion: some `i` with
/// `2·v(∂ᵢF(P)) < v(F(P))`. Returns the precision `v(F(P))` (or the bound it
/// needs to beat when `F(P) = 0`).
fn hensel_precision(form: &QuarticForm, pt: &[BigInt; 3], p: &BigInt) -> Option<u32> {
    let grad = form.gradient(pt, None);
    let min_v = grad.iter().filter_map(|g| valuation_of(g, p)).min()?;
    match valuation_of(&form.evaluate(pt, None), p) {
        None => Some(2 * min_v + 1),
        Some(v) if 2 * min_v < v => Some(v),
        Some(_) => None,
    }
}

/// Newton-refines an integer point on a coordinate with unit partial
/// derivative until the literal Hensel criterion holds.
pub fn hensel_refine(form: &QuarticForm, p: u64, start: [BigInt; 3]) -> Option<([BigInt; 3], u32)> {
    let pb = BigInt::from(p);
    let mut pt = start;
    for _ in 0..REFINE_STEPS {
        if let Some(prec) = hensel_precision(form, &pt, &pb) {
            return Some((pt, prec));
        }
        let value = form.evaluate(&pt, None);
        let grad = form.gradient(&pt, None);
        let var = grad.iter().position(|g| !g.is_multiple_of(&pb))?;
        let v = valuation_of(&value, &pb).unwrap_or(0).max(1);
        let modulus = pb.pow(2 * v);
        let inv = mod_inverse(&grad[var].mod_floor(&modulus), &modulus)?;
        pt[var] = (&pt[var] - value * inv).mod_floor(&modulus);
    }
    None
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let ext = a.extended_gcd(m);
    ext.gcd.is_one().then(|| ext.x.mod_floor(m))
}

enum Examined {
    Success(Witness),
    Children(Vec<Node>),
    Failed(String),
}

fn refine_on_node(
    form: &QuarticForm,
    node: &Node,
    r: [u64; 2],
    var: usize,
    p: &BigInt,
    level: u32,
) -> Examined {
    let dg = partial_bi(&node.g, var);
    let mut u = r.map(BigInt::from);
    let mut m = 1u32;
    for _ in 0..REFINE_STEPS {
        let pt = node.point([&u[0], &u[1]], p);
        if let Some(precision) = hensel_precision(form, &pt, p) {
            return Examined::Success(Witness::PAdic {
                coords: pt,
                precision,
                level,
            });
        }
        let modulus = p.pow(2 * m);
        let value = eval_bi(&node.g, [&u[0], &u[1]]);
        let deriv = eval_bi(&dg, [&u[0], &u[1]]).mod_floor(&modulus);
        let Some(inv) = mod_inverse(&deriv, &modulus) else {
            break;
        };
        u[var] = (&u[var] - value * inv).mod_floor(&modulus);
        m *= 2;
    }
    Examined::Failed(format!("Newton refinement stalled at level {level}"))
}

fn examine(form: &QuarticForm, node: &Node, p: u64, pb: &BigInt, level: u32) -> (Examined, u64) {
    let gm: [[u64; 5]; 5] =
        std::array::from_fn(|a| std::array::from_fn(|b| mod_floor_u64(&node.g[a][b], p)));
    let d1: [[u64; 5]; 5] = std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            if a < 4 {
                mulm(gm[a + 1][b], (a as u64 + 1) % p, p)
            } else {
                0
            }
        })
    });
    let d2: [[u64; 5]; 5] = std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            if b < 4 {
                mulm(gm[a][b + 1], (b as u64 + 1) % p, p)
            } else {
                0
            }
        })
    });
    let at = |poly: &[[u64; 5]; 5], r1: u64, r2: u64| -> u64 {
        poly.iter().rev().fold(0u64, |acc, row| {
            let inner = row
                .iter()
                .rev()
                .fold(0u64, |s, &c| (mulm(s, r2, p) + c) % p);
            (mulm(acc, r1, p) + inner) % p
        })
    };
    let mut children = Vec::new();
    let mut work = 0u64;
    for r1 in 0..p {
        let h: [u64; 5] = std::array::from_fn(|b| {
            gm.iter()
                .rev()
                .fold(0u64, |acc, row| (mulm(acc, r1, p) + row[b]) % p)
        });
        work += p;
        for (r2, value) in values_mod(&h, p).enumerate() {
            if value != 0 {
                continue;
            }
            let r2 = r2 as u64;
            let r = [r1, r2];
            if at(&d1, r1, r2) != 0 {
                return (refine_on_node(form, node, r, 0, pb, level), work);
            }
            if at(&d2, r1, r2) != 0 {
                return (refine_on_node(form, node, r, 1, pb, level), work);
            }
            let (a, b) = (BigInt::from(r1), BigInt::from(r2));
            let pt = node.point([&a, &b], pb);
            if let Some(precision) = hensel_precision(form, &pt, pb) {
                return (
                    Examined::Success(Witness::PAdic {
                        coords: pt,
                        precision,
                        level,
                    }),
                    work,
                );
            }
            if let Some(c) = child(node, r, pb) {
                children.push(c);
            }
        }
    }
    (Examined::Children(children), work)
}

/// Decides whether `F` has a point over ℚ_p by the lifting tree.
pub fn qp_solvable(form: &QuarticForm, p: u64, depth_cap: u32) -> Result<LocalVerdict> {
    if depth_cap < 1 {
        return Err(Error::InvalidArgument(
            "depth_cap must be at least 1".into(),
        ));
    }
    if !crate::arith::is_prime_u64(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let pb = BigInt::from(p);
    let place = Place::Prime(p.into());
    let verdict = |status, work| LocalVerdict {
        place: place.clone(),
        status,
        work,
        method: "lifting tree",
    };
    let mut nodes: Vec<Node> = (0..3).filter_map(|pin| root_node(form, pin, &pb)).collect();
    let mut work = 0u64;
    for level in 1..=depth_cap {
        let outcomes: Vec<(Examined, u64)> = nodes
            .par_iter()
            .map(|n| examine(form, n, p, &pb, level))
            .collect();
        let mut next = Vec::new();
        for (outcome, w) in outcomes {
            work += w;
            match outcome {
                Examined::Success(witness) => {
                    return Ok(verdict(LocalStatus::HasPoint(witness), work))
                }
                Examined::Failed(reason) => {
                    return Ok(verdict(LocalStatus::Inconclusive { reason }, work));
                }
                Examined::Children(c) => next.extend(c),
            }
        }
        if next.is_empty() {
            return Ok(verdict(LocalStatus::Empty { level }, work));
        }
        if next.len() > MAX_LEVEL_NODES || work > MAX_WORK {
            let reason = format!("work budget exhausted at level {level}");
            return Ok(verdict(LocalStatus::Inconclusive { reason }, work));
        }
        nodes = next;
    }
    let reason = format!("depth cap {depth_cap} reached");
    Ok(verdict(LocalStatus::Inconclusive { reason }, work))
}
