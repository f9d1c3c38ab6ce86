//! Finitely supported signed measures with exact rational weights, and their
//! bilinear convolution.
//!
//! A [`Measure`] never stores a zero weight, so its key set is exactly its
//! support and derived `PartialEq` is pointwise equality. Points are any
//! ordered type; the order is also the rendering order.

use std::collections::btree_map::{self, BTreeMap};
use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Measure<P: Ord> {
    weights: BTreeMap<P, Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureError {
    #[error("point convolution undefined on pair ({left}, {right})")]
    Undefined { left: String, right: String },
}

/// A rule assigning a measure `p_x * p_y` to every pair of points.
///
/// Returning `None` means the rule is not defined at that pair.
pub trait PointConvolution<P: Ord> {
    fn convolve_points(&self, x: &P, y: &P) -> Option<Measure<P>>;
}

impl<P, F> PointConvolution<P> for F
where
    P: Ord,
    F: Fn(&P, &P) -> Option<Measure<P>>,
{
    fn convolve_points(&self, x: &P, y: &P) -> Option<Measure<P>> {
        self(x, y)
    }
}

impl<P: Ord> Default for Measure<P> {
    fn default() -> Self {
        Measure {
            weights: BTreeMap::new(),
        }
    }
}

impl<P: Ord + Clone> Measure<P> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `p_x`: weight one at `x`.
    pub fn point_mass(x: P) -> Self {
        let mut weights = BTreeMap::new();
        weights.insert(x, Rational::one());
        Measure { weights }
    }

    /// Sums `(point, weight)` pairs, merging repeated points and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (P, Rational)>>(terms: I) -> Self {
        let mut m = Self::zero();
        for (p, w) in terms {
            m.add_weight(p, &w);
        }
        m
    }

    /// `Σ c_i · μ_i`.
    pub fn linear_combine<'a, I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Rational, &'a Measure<P>)>,
        P: 'a,
    {
        let mut out = Self::zero();
        for (c, mu) in terms {
            out.add_scaled(&c, mu);
        }
        out
    }

    fn add_weight(&mut self, p: P, w: &Rational) {
        if w.is_zero() {
            return;
        }
        match self.weights.entry(p) {
            btree_map::Entry::Vacant(slot) => {
                slot.insert(w.clone());
            }
            btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += w;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    /// `self += c · mu`.
    pub fn add_scaled(&mut self, c: &Rational, mu: &Measure<P>) {
        if c.is_zero() {
            return;
        }
        for (p, w) in &mu.weights {
            self.add_weight(p.clone(), &(c * w));
        }
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        out.add_scaled(c, self);
        out
    }

    /// Moves every weight from `z` to `f(z)`.
    pub fn pushforward<Q: Ord + Clone, F: FnMut(&P) -> Q>(&self, mut f: F) -> Measure<Q> {
        let mut out = Measure::zero();
        for (p, w) in &self.weights {
            out.add_weight(f(p), w);
        }
        out
    }

    /// Like [`Measure::pushforward`] but the map may fail.
    pub fn try_pushforward<Q, E, F>(&self, mut f: F) -> Result<Measure<Q>, E>
    where
        Q: Ord + Clone,
        F: FnMut(&P) -> Result<Q, E>,
    {
        let mut out = Measure::zero();
        for (p, w) in &self.weights {
            out.add_weight(f(p)?, w);
        }
        Ok(out)
    }
}

impl<P: Ord> Measure<P> {
    pub fn weight(&self, x: &P) -> Rational {
        self.weights.get(x).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> std::collections::btree_map::Keys<'_, P, Rational> {
        self.weights.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&P, &Rational)> + '_ {
        self.weights.iter()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn contains(&self, x: &P) -> bool {
        self.weights.contains_key(x)
    }

    /// Total weight.
    pub fn mass(&self) -> Rational {
        self.weights.values().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.weights.values().all(|w| w.is_positive())
    }

    /// All weights strictly positive and total mass one.
    pub fn is_probability(&self) -> bool {
        !self.is_empty() && self.is_nonnegative() && self.mass().is_one()
    }

    /// `Some(x)` when this is exactly `p_x`.
    pub fn as_point_mass(&self) -> Option<&P> {
        match self.weights.iter().next() {
            Some((p, w)) if self.weights.len() == 1 && w.is_one() => Some(p),
            _ => None,
        }
    }
}

impl<P: Ord + Clone + fmt::Debug> Measure<P> {
    /// Bilinear extension of a point rule: `Σ_{x,y} μ(x)·ν(y)·conv(x, y)`.
    pub fn convolve<C>(&self, other: &Measure<P>, conv: &C) -> Result<Measure<P>, MeasureError>
    where
        C: PointConvolution<P> + ?Sized,
    {
        convolve_extend(self, other, conv)
    }
}

/// Bilinear extension of a point convolution to finitely supported measures.
pub fn convolve_extend<P, C>(
    mu: &Measure<P>,
    nu: &Measure<P>,
    conv: &C,
) -> Result<Measure<P>, MeasureError>
where
    P: Ord + Clone + fmt::Debug,
    C: PointConvolution<P> + ?Sized,
{
    let mut out = Measure::zero();
    for (x, wx) in mu.iter() {
        for (y, wy) in nu.iter() {
            let pxy = conv
                .convolve_points(x, y)
                .ok_or_else(|| MeasureError::Undefined {
                    left: format!("{x:?}"),
                    right: format!("{y:?}"),
                })?;
            out.add_scaled(&(wx * wy), &pxy);
        }
    }
    Ok(out)
}

/// Union of `supp(conv(x, y))` over `x ∈ A`, `y ∈ B`.
pub fn subset_convolution<'a, P, C, A, B>(a: A, b: B, conv: &C) -> Result<BTreeSet<P>, MeasureError>
where
    P: Ord + Clone + fmt::Debug + 'a,
    C: PointConvolution<P> + ?Sized,
    A: IntoIterator<Item = &'a P>,
    B: IntoIterator<Item = &'a P> + Clone,
{
    let mut out = BTreeSet::new();
    for x in a {
        for y in b.clone() {
            let pxy = conv
                .convolve_points(x, y)
                .ok_or_else(|| MeasureError::Undefined {
                    left: format!("{x:?}"),
                    right: format!("{y:?}"),
                })?;
            out.extend(pxy.support().cloned());
        }
    }
    Ok(out)
}

/// Renders `(weight, label)` terms as `"w * label + ..."`, or `"0"` when empty.
/// Terms are emitted in the order given.
pub fn format_terms<'a, I, L>(terms: I) -> String
where
    I: IntoIterator<Item = (&'a Rational, L)>,
    L: fmt::Display,
{
    let parts: Vec<String> = terms
        .into_iter()
        .map(|(w, label)| format!("{w} * {label}"))
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

impl<P: Ord + fmt::Display> fmt::Display for Measure<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_terms(self.weights.iter().map(|(p, w)| (w, p))))
    }
}

impl<P: Ord + fmt::Debug> fmt::Debug for Measure<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.weights.iter()).finish()
    }
}

impl<P: Ord + Clone> FromIterator<(P, Rational)> for Measure<P> {
    fn from_iter<I: IntoIterator<Item = (P, Rational)>>(iter: I) -> Self {
        Measure::from_terms(iter)
    }
}
