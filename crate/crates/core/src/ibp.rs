//! Canonical forms of invariant expressions under integration by parts.
//!
//! `V` is compactly supported, so `∫ ∂_c(F) G = -∫ F ∂_c G` holds for any
//! products of derivatives `F`, `G`. The rewriting rules are:
//!
//! * a single factor with at least one derivative integrates to zero;
//! * a quadratic `∫ ∂^a V ∂^b V` equals `(-1)^{|a|-|c|} ∫ ∂^c V ∂^d V` for every
//!   split `c + d = a + b`, and is mapped to the balanced split (it vanishes
//!   when `|a + b|` is odd);
//! * a monomial of degree three or more moves one derivative off a factor of
//!   maximal order (at least 2) onto the others by the product rule, provided
//!   every resulting monomial has a strictly smaller descending order profile.
//!   Among admissible moves the one with the smallest worst-case profile wins,
//!   ties going to the first factor and axis. A result equal to the source
//!   monomial is solved for algebraically.
//!
//! Rewriting stops when no monomial admits a move.

use std::collections::BTreeMap;

use crate::invariant::{DiffMonomial, Expression};
use crate::multi_index::MultiIndex;
use crate::scalar::Coeff;

type Key = (Vec<u32>, DiffMonomial);

fn key(m: DiffMonomial) -> Key {
    (m.order_profile(), m)
}

/// Applies the integration-by-parts rules until a fixed point is reached.
pub fn ibp_canonicalize<T: Coeff>(expr: &Expression<T>) -> Expression<T> {
    let mut out = Expression::zero(expr.dim(), expr.order());
    let mut pending: BTreeMap<Key, T> = BTreeMap::new();
    for (m, c) in expr.terms() {
        push(&mut pending, m.clone(), c.clone());
    }
    // Rewrites only produce strictly smaller keys, so popping the largest key
    // first sees every contribution to a monomial before rewriting it.
    while let Some(((_, m), c)) = pending.pop_last() {
        match m.degree() {
            1 => {
                if m.total_order() == 0 {
                    out.add_term(m, c);
                }
            }
            2 => {
                if let Some((normal, negate)) = quadratic_normal_form(&m.factors()[0], &m.factors()[1]) {
                    out.add_term(normal, if negate { -c } else { c });
                }
            }
            _ => match best_move(&m) {
                Some(rewrite) => {
                    for (r, w) in rewrite.results {
                        let scaled = c.clone() * T::from_i64_exact(w) / T::from_i64_exact(rewrite.denominator);
                        push(&mut pending, r, scaled);
                    }
                }
                None => out.add_term(m, c),
            },
        }
    }
    out
}

fn push<T: Coeff>(pending: &mut BTreeMap<Key, T>, m: DiffMonomial, c: T) {
    if c.is_zero() {
        return;
    }
    let k = key(m);
    let sum = match pending.remove(&k) {
        Some(prev) => prev + c,
        None => c,
    };
    if !sum.is_zero() {
        pending.insert(k, sum);
    }
}

/// `∫ ∂^a V ∂^b V` as `±∫ ∂^c V ∂^d V` with `|c| = |d|`; `None` when it vanishes.
fn quadratic_normal_form(a: &MultiIndex, b: &MultiIndex) -> Option<(DiffMonomial, bool)> {
    let gamma = a.add(b);
    if gamma.order() % 2 == 1 {
        return None;
    }
    let mut c = Vec::with_capacity(gamma.dim());
    let mut give_first = true;
    for &g in gamma.exponents() {
        let mut half = g / 2;
        if g % 2 == 1 {
            if give_first {
                half += 1;
            }
            give_first = !give_first;
        }
        c.push(half);
    }
    let c = MultiIndex::new(c);
    let d = MultiIndex::new(gamma.exponents().iter().zip(c.exponents()).map(|(g, h)| g - h).collect());
    let negate = (a.order() + c.order()) % 2 == 1;
    Some((DiffMonomial::new(vec![c, d]), negate))
}

/// `m = Σ (w / denominator) · result`.
struct Rewrite {
    results: Vec<(DiffMonomial, i64)>,
    denominator: i64,
}

fn best_move(m: &DiffMonomial) -> Option<Rewrite> {
    let factors = m.factors();
    let top = m.max_order();
    if top < 2 {
        return None;
    }
    let profile = m.order_profile();
    let mut best: Option<(Vec<u32>, Rewrite)> = None;
    for (f, source) in factors.iter().enumerate() {
        if source.order() != top {
            continue;
        }
        for axis in 0..source.dim() {
            let Some(lowered) = source.lowered(axis) else { continue };
            let mut self_refs = 0i64;
            let mut others: BTreeMap<DiffMonomial, i64> = BTreeMap::new();
            let mut admissible = true;
            let mut worst: Vec<u32> = Vec::new();
            for g in (0..factors.len()).filter(|&g| g != f) {
                let mut next = factors.to_vec();
                next[f] = lowered.clone();
                next[g] = factors[g].raised(axis);
                let r = DiffMonomial::new(next);
                if &r == m {
                    self_refs += 1;
                    continue;
                }
                let p = r.order_profile();
                if p >= profile {
                    admissible = false;
                    break;
                }
                if p > worst {
                    worst = p;
                }
                *others.entry(r).or_insert(0) += 1;
            }
            if !admissible {
                continue;
            }
            if best.as_ref().is_some_and(|(w, _)| &worst >= w) {
                continue;
            }
            // m = -Σ others - self_refs · m
            let rewrite = Rewrite {
                results: others.into_iter().map(|(r, k)| (r, -k)).collect(),
                denominator: 1 + self_refs,
            };
            best = Some((worst, rewrite));
        }
    }
    best.map(|(_, r)| r)
}
