//! Finite semihypergroups stored as dense convolution tables.
//!
//! Elements are addressed by their index in [`FiniteSemihypergroup::elements`];
//! every measure produced here is a `Measure<usize>` over those indices.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::measure::{convolve_extend, Measure, MeasureError, PointConvolution};

/// Element index inside a [`FiniteSemihypergroup`].
pub type Elem = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("structure has no elements")]
    Empty,
    #[error("duplicate element name `{0}`")]
    DuplicateElement(String),
    #[error("table has {found} rows/columns, expected {expected}")]
    TableShape { expected: usize, found: usize },
    #[error("table entry ({x}, {y}) puts weight on index {index}, which is not an element")]
    SupportOutside { x: String, y: String, index: usize },
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("relabeling must supply {expected} distinct names")]
    BadRelabel { expected: usize },
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// A finite semihypergroup `(K, *)`: a point set and `p_x * p_y` for every pair.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteSemihypergroup {
    name: String,
    elements: Vec<String>,
    table: Vec<Measure<Elem>>,
    identity: Option<Elem>,
}

impl FiniteSemihypergroup {
    /// Builds a structure from a dense table, `table[x][y] = p_x * p_y`.
    ///
    /// Only the shape is validated here; the semihypergroup axioms are checked
    /// by [`FiniteSemihypergroup::verify_axioms`]. The identity is detected from
    /// the table.
    pub fn from_table(
        name: impl Into<String>,
        elements: Vec<String>,
        table: Vec<Vec<Measure<Elem>>>,
    ) -> Result<Self, StructureError> {
        let n = elements.len();
        if n == 0 {
            return Err(StructureError::Empty);
        }
        let mut seen = HashMap::new();
        for (i, e) in elements.iter().enumerate() {
            if seen.insert(e.as_str(), i).is_some() {
                return Err(StructureError::DuplicateElement(e.clone()));
            }
        }
        if table.len() != n {
            return Err(StructureError::TableShape {
                expected: n,
                found: table.len(),
            });
        }
        let mut flat = Vec::with_capacity(n * n);
        for (x, row) in table.into_iter().enumerate() {
            if row.len() != n {
                return Err(StructureError::TableShape {
                    expected: n,
                    found: row.len(),
                });
            }
            for (y, entry) in row.into_iter().enumerate() {
                if let Some(&index) = entry.support().find(|&&z| z >= n) {
                    return Err(StructureError::SupportOutside {
                        x: elements[x].clone(),
                        y: elements[y].clone(),
                        index,
                    });
                }
                flat.push(entry);
            }
        }
        let mut k = FiniteSemihypergroup {
            name: name.into(),
            elements,
            table: flat,
            identity: None,
        };
        k.identity = k.find_identity();
        Ok(k)
    }

    /// Builds a structure from a rule evaluated on every pair of indices.
    pub fn from_fn<F>(
        name: impl Into<String>,
        elements: Vec<String>,
        mut f: F,
    ) -> Result<Self, StructureError>
    where
        F: FnMut(Elem, Elem) -> Measure<Elem>,
    {
        let n = elements.len();
        let table = (0..n).map(|x| (0..n).map(|y| f(x, y)).collect()).collect();
        Self::from_table(name, elements, table)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element_name(&self, x: Elem) -> &str {
        &self.elements[x]
    }

    pub fn index_of(&self, name: &str) -> Option<Elem> {
        self.elements.iter().position(|e| e == name)
    }

    pub fn elem(&self, name: &str) -> Result<Elem, StructureError> {
        self.index_of(name)
            .ok_or_else(|| StructureError::UnknownElement(name.to_string()))
    }

    pub fn identity(&self) -> Option<Elem> {
        self.identity
    }

    /// `p_x * p_y`.
    pub fn product(&self, x: Elem, y: Elem) -> &Measure<Elem> {
        &self.table[x * self.len() + y]
    }

    /// Convolution of arbitrary finitely supported measures over this structure.
    pub fn convolve(
        &self,
        mu: &Measure<Elem>,
        nu: &Measure<Elem>,
    ) -> Result<Measure<Elem>, MeasureError> {
        convolve_extend(mu, nu, self)
    }

    /// Renames elements in place of their current names, keeping the table.
    pub fn relabeled(&self, names: Vec<String>) -> Result<Self, StructureError> {
        if names.len() != self.len() {
            return Err(StructureError::BadRelabel {
                expected: self.len(),
            });
        }
        let mut k = self.clone();
        k.elements = names;
        let mut seen = std::collections::HashSet::new();
        if !k.elements.iter().all(|e| seen.insert(e.as_str())) {
            return Err(StructureError::BadRelabel {
                expected: self.len(),
            });
        }
        Ok(k)
    }

    /// Reorders elements by `perm` (new position `i` holds old element
    /// `perm[i]`), transporting the table.
    pub fn permuted(&self, perm: &[Elem]) -> Result<Self, StructureError> {
        let n = self.len();
        let mut inverse = vec![usize::MAX; n];
        if perm.len() != n {
            return Err(StructureError::BadRelabel { expected: n });
        }
        for (new, &old) in perm.iter().enumerate() {
            if old >= n || inverse[old] != usize::MAX {
                return Err(StructureError::BadRelabel { expected: n });
            }
            inverse[old] = new;
        }
        let names = perm.iter().map(|&old| self.elements[old].clone()).collect();
        Self::from_fn(self.name.clone(), names, |x, y| {
            self.product(perm[x], perm[y]).pushforward(|&z| inverse[z])
        })
    }

    /// Measure over element indices rendered with element names, sorted by name.
    pub fn format_measure(&self, mu: &Measure<Elem>) -> String {
        mu.pushforward(|&z| self.elements[z].clone()).to_string()
    }

    /// Parses `{name: weight}` terms into a measure over indices.
    pub fn named_measure<'a, I>(&self, terms: I) -> Result<Measure<Elem>, StructureError>
    where
        I: IntoIterator<Item = (&'a str, crate::Rational)>,
    {
        terms
            .into_iter()
            .map(|(name, w)| Ok((self.elem(name)?, w)))
            .collect::<Result<Vec<_>, StructureError>>()
            .map(Measure::from_terms)
    }

    /// The unique `e` with `p_e * p_x = p_x * p_e = p_x` for all `x`.
    pub fn find_identity(&self) -> Option<Elem> {
        let candidates = self.identity_candidates();
        // Two identities e, f would give p_e = p_e * p_f = p_f.
        debug_assert!(candidates.len() <= 1);
        candidates.first().copied()
    }

    /// Every element acting as a two-sided identity; at most one for any table.
    pub fn identity_candidates(&self) -> Vec<Elem> {
        (0..self.len())
            .filter(|&e| {
                (0..self.len()).all(|x| {
                    self.product(e, x).as_point_mass() == Some(&x)
                        && self.product(x, e).as_point_mass() == Some(&x)
                })
            })
            .collect()
    }

    /// Some `e` with `p_x * p_e = p_x` for all `x`.
    pub fn right_identity(&self) -> Option<Elem> {
        (0..self.len())
            .find(|&e| (0..self.len()).all(|x| self.product(x, e).as_point_mass() == Some(&x)))
    }

    /// Some `e` with `p_e * p_x = p_x` for all `x`.
    pub fn left_identity(&self) -> Option<Elem> {
        (0..self.len())
            .find(|&e| (0..self.len()).all(|x| self.product(e, x).as_point_mass() == Some(&x)))
    }

    /// A pair of non-identity elements with `p_x * p_y = p_e`, if any.
    pub fn impurity_witness(&self) -> Option<(Elem, Elem)> {
        let e = self.identity?;
        (0..self.len())
            .filter(|&x| x != e)
            .flat_map(|x| {
                (0..self.len())
                    .filter(move |&y| y != e)
                    .map(move |y| (x, y))
            })
            .find(|&(x, y)| self.product(x, y).as_point_mass() == Some(&e))
    }

    /// No identity, or `p_x * p_y != p_e` for all non-identity `x, y`.
    pub fn is_pure(&self) -> bool {
        self.impurity_witness().is_none()
    }

    /// Checks that every `p_x * p_y` is a probability measure and that
    /// `(p_x * p_y) * p_z = p_x * (p_y * p_z)` for every triple.
    pub fn verify_axioms(&self) -> AxiomReport {
        let n = self.len();
        let mut violations: Vec<Violation> = Vec::new();
        for x in 0..n {
            for y in 0..n {
                let m = self.product(x, y);
                if !m.is_probability() {
                    violations.push(Violation::NotProbability {
                        x,
                        y,
                        measure: m.clone(),
                    });
                }
            }
        }
        let triples: Vec<Violation> = (0..n)
            .into_par_iter()
            .flat_map_iter(|x| {
                let mut found = Vec::new();
                for y in 0..n {
                    let xy = self.product(x, y);
                    let px = Measure::point_mass(x);
                    for z in 0..n {
                        let left = self
                            .convolve(xy, &Measure::point_mass(z))
                            .expect("table supports stay inside elements");
                        let right = self
                            .convolve(&px, self.product(y, z))
                            .expect("table supports stay inside elements");
                        if left != right {
                            found.push(Violation::NotAssociative {
                                x,
                                y,
                                z,
                                left,
                                right,
                            });
                        }
                    }
                }
                found
            })
            .collect();
        violations.extend(triples);
        AxiomReport {
            pairs_checked: n * n,
            triples_checked: n * n * n,
            violations,
        }
    }

    /// Full table as `(x, y, p_x * p_y)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (Elem, Elem, &Measure<Elem>)> + '_ {
        let n = self.len();
        self.table
            .iter()
            .enumerate()
            .map(move |(i, m)| (i / n, i % n, m))
    }

    /// Table keyed by element names: `x -> y -> (z -> weight)`.
    pub fn named_table(&self) -> BTreeMap<&str, BTreeMap<&str, Measure<String>>> {
        let mut out: BTreeMap<&str, BTreeMap<&str, Measure<String>>> = BTreeMap::new();
        for (x, y, m) in self.entries() {
            out.entry(self.element_name(x)).or_default().insert(
                self.element_name(y),
                m.pushforward(|&z| self.elements[z].clone()),
            );
        }
        out
    }
}

impl PointConvolution<Elem> for FiniteSemihypergroup {
    fn convolve_points(&self, x: &Elem, y: &Elem) -> Option<Measure<Elem>> {
        (*x < self.len() && *y < self.len()).then(|| self.product(*x, *y).clone())
    }
}

impl fmt::Debug for FiniteSemihypergroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteSemihypergroup")
            .field("name", &self.name)
            .field("elements", &self.elements)
            .field("identity", &self.identity.map(|e| &self.elements[e]))
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `p_x * p_y` is not a probability measure.
    NotProbability {
        x: Elem,
        y: Elem,
        measure: Measure<Elem>,
    },
    /// `(p_x * p_y) * p_z` differs from `p_x * (p_y * p_z)`.
    NotAssociative {
        x: Elem,
        y: Elem,
        z: Elem,
        left: Measure<Elem>,
        right: Measure<Elem>,
    },
}

impl Violation {
    pub fn describe(&self, k: &FiniteSemihypergroup) -> String {
        let name = |i: &Elem| k.element_name(*i);
        match self {
            Violation::NotProbability { x, y, measure } => format!(
                "A3: p_{} * p_{} = {} is not a probability measure",
                name(x),
                name(y),
                k.format_measure(measure)
            ),
            Violation::NotAssociative {
                x,
                y,
                z,
                left,
                right,
            } => format!(
                "A1: triple ({}, {}, {}): (p_x*p_y)*p_z = {} but p_x*(p_y*p_z) = {}",
                name(x),
                name(y),
                name(z),
                k.format_measure(left),
                k.format_measure(right)
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn probability_passed(&self) -> bool {
        !self
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NotProbability { .. }))
    }

    pub fn associativity_passed(&self) -> bool {
        !self
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NotAssociative { .. }))
    }

    pub fn associativity_violation(
        &self,
        x: Elem,
        y: Elem,
        z: Elem,
    ) -> Option<(&Measure<Elem>, &Measure<Elem>)> {
        self.violations.iter().find_map(|v| match v {
            Violation::NotAssociative {
                x: a,
                y: b,
                z: c,
                left,
                right,
            } if (*a, *b, *c) == (x, y, z) => Some((left, right)),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomError {
    #[error("map has {found} entries but the source has {expected} elements")]
    Arity { expected: usize, found: usize },
    #[error("image index {0} is not an element of the target")]
    OutOfRange(usize),
    #[error("not a homomorphism at ({x}, {y}): pushforward of p_x*p_y is {pushed}, but p_phi(x)*p_phi(y) is {convolved}")]
    Violated {
        x: String,
        y: String,
        pushed: String,
        convolved: String,
    },
    #[error("measure has weight on index {0}, outside the source")]
    OutsideSource(usize),
}

/// A point map between finite semihypergroups.
#[derive(Debug, Clone)]
pub struct Homomorphism<'a> {
    source: &'a FiniteSemihypergroup,
    target: &'a FiniteSemihypergroup,
    map: Vec<Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomFailure {
    pub x: Elem,
    pub y: Elem,
    pub pushed: Measure<Elem>,
    pub convolved: Measure<Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomReport {
    pub pairs_checked: usize,
    pub failures: Vec<HomFailure>,
}

impl HomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl<'a> Homomorphism<'a> {
    /// Wraps a point map; only the range is validated here.
    pub fn new(
        source: &'a FiniteSemihypergroup,
        target: &'a FiniteSemihypergroup,
        map: Vec<Elem>,
    ) -> Result<Self, HomError> {
        if map.len() != source.len() {
            return Err(HomError::Arity {
                expected: source.len(),
                found: map.len(),
            });
        }
        if let Some(&bad) = map.iter().find(|&&z| z >= target.len()) {
            return Err(HomError::OutOfRange(bad));
        }
        Ok(Homomorphism {
            source,
            target,
            map,
        })
    }

    pub fn identity(k: &'a FiniteSemihypergroup) -> Self {
        Homomorphism {
            source: k,
            target: k,
            map: (0..k.len()).collect(),
        }
    }

    /// Builds the map from `(source name, target name)` pairs.
    pub fn from_names<'n, I>(
        source: &'a FiniteSemihypergroup,
        target: &'a FiniteSemihypergroup,
        pairs: I,
    ) -> Result<Self, StructureError>
    where
        I: IntoIterator<Item = (&'n str, &'n str)>,
    {
        let mut map = vec![None; source.len()];
        for (from, to) in pairs {
            map[source.elem(from)?] = Some(target.elem(to)?);
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(i, z)| {
                z.ok_or_else(|| {
                    StructureError::UnknownElement(format!(
                        "no image for `{}`",
                        source.element_name(i)
                    ))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Homomorphism {
            source,
            target,
            map,
        })
    }

    pub fn source(&self) -> &'a FiniteSemihypergroup {
        self.source
    }

    pub fn target(&self) -> &'a FiniteSemihypergroup {
        self.target
    }

    pub fn map(&self) -> &[Elem] {
        &self.map
    }

    pub fn apply(&self, x: Elem) -> Elem {
        self.map[x]
    }

    /// Pushforward of `p_x * p_y` against `p_phi(x) * p_phi(y)` for every pair.
    pub fn check(&self) -> HomReport {
        let n = self.source.len();
        let mut failures = Vec::new();
        for x in 0..n {
            for y in 0..n {
                let pushed = self.source.product(x, y).pushforward(|&z| self.map[z]);
                let convolved = self.target.product(self.map[x], self.map[y]);
                if &pushed != convolved {
                    failures.push(HomFailure {
                        x,
                        y,
                        pushed,
                        convolved: convolved.clone(),
                    });
                }
            }
        }
        HomReport {
            pairs_checked: n * n,
            failures,
        }
    }

    pub fn ensure(&self) -> Result<(), HomError> {
        match self.check().failures.into_iter().next() {
            None => Ok(()),
            Some(f) => Err(HomError::Violated {
                x: self.source.element_name(f.x).to_string(),
                y: self.source.element_name(f.y).to_string(),
                pushed: self.target.format_measure(&f.pushed),
                convolved: self.target.format_measure(&f.convolved),
            }),
        }
    }

    /// `other ∘ self`. Panics if `other` does not start where `self` ends.
    pub fn then(&self, other: &Homomorphism<'a>) -> Homomorphism<'a> {
        assert!(
            std::ptr::eq(self.target, other.source) || self.target == other.source,
            "composition across mismatched structures"
        );
        Homomorphism {
            source: self.source,
            target: other.target,
            map: self.map.iter().map(|&z| other.map[z]).collect(),
        }
    }

    /// The measure-algebra lift `Γ_φ`, available only for verified homomorphisms.
    pub fn gamma_lift(&self) -> Result<GammaLift<'a>, HomError> {
        self.ensure()?;
        Ok(GammaLift { hom: self.clone() })
    }
}

/// `Γ_φ`: the linear extension of `p_x ↦ p_φ(x)`.
#[derive(Debug, Clone)]
pub struct GammaLift<'a> {
    hom: Homomorphism<'a>,
}

impl<'a> GammaLift<'a> {
    pub fn homomorphism(&self) -> &Homomorphism<'a> {
        &self.hom
    }

    pub fn apply(&self, mu: &Measure<Elem>) -> Result<Measure<Elem>, HomError> {
        mu.try_pushforward(|&x| {
            self.hom
                .map
                .get(x)
                .copied()
                .ok_or(HomError::OutsideSource(x))
        })
    }
}
