//! Builders for the standard families of semihypergroups: semigroups, the
//! three-point commutative family, coset and double-coset spaces, orbit
//! spaces, and free words.
//!
//! Averages over a finite group `H` use normalized counting measure.

use thiserror::Error;

use crate::group::{associativity_witness, flatten_cayley, FiniteGroup, GroupAction, GroupError};
use crate::measure::{Measure, PointConvolution};
use crate::rational::Rational;
use crate::shg::{Elem, FiniteSemihypergroup, StructureError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("semigroup operation is not associative at ({x}, {y}, {z})")]
    NotAssociative { x: String, y: String, z: String },
    #[error("parameter constraint violated: {equation} ({detail})")]
    Constraint {
        equation: &'static str,
        detail: String,
    },
    #[error("convolution of ({x}, {y}) depends on the representatives: {first} vs {second}")]
    RepresentativeDependence {
        x: String,
        y: String,
        first: String,
        second: String,
    },
    #[error("result is not a semihypergroup: {0}")]
    Axioms(String),
}

/// `(S, ·)` viewed as a semihypergroup with `p_x * p_y = p_{x·y}`.
pub fn from_semigroup(
    name: impl Into<String>,
    elements: Vec<String>,
    cayley: Vec<Vec<Elem>>,
) -> Result<FiniteSemihypergroup, ConstructionError> {
    let flat = flatten_cayley(&elements, cayley)?;
    let n = elements.len();
    if let Some((x, y, z)) = associativity_witness(n, &flat) {
        return Err(ConstructionError::NotAssociative {
            x: elements[x].clone(),
            y: elements[y].clone(),
            z: elements[z].clone(),
        });
    }
    Ok(FiniteSemihypergroup::from_fn(name, elements, |x, y| {
        Measure::point_mass(flat[x * n + y])
    })?)
}

pub fn from_group(g: &FiniteGroup) -> FiniteSemihypergroup {
    FiniteSemihypergroup::from_fn(g.name(), g.elements().to_vec(), |x, y| {
        Measure::point_mass(g.mul(x, y))
    })
    .expect("group table is well formed")
}

/// Parameters of the commutative structure on `{e, a, b}`:
///
/// ```text
/// p_a * p_a = x1 p_e + x2 p_a + x3 p_b
/// p_b * p_b = y1 p_e + y2 p_a + y3 p_b
/// p_a * p_b = p_b * p_a = z1 p_a + z2 p_b
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeElementParams {
    pub x: [Rational; 3],
    pub y: [Rational; 3],
    pub z: [Rational; 2],
}

impl ThreeElementParams {
    pub fn new(x: [Rational; 3], y: [Rational; 3], z: [Rational; 2]) -> Self {
        ThreeElementParams { x, y, z }
    }

    /// Order `x1,x2,x3,y1,y2,y3,z1,z2`.
    pub fn from_slice(v: &[Rational]) -> Option<Self> {
        match v {
            [x1, x2, x3, y1, y2, y3, z1, z2] => Some(ThreeElementParams {
                x: [x1.clone(), x2.clone(), x3.clone()],
                y: [y1.clone(), y2.clone(), y3.clone()],
                z: [z1.clone(), z2.clone()],
            }),
            _ => None,
        }
    }

    /// Checks nonnegativity, the three normalizations, and the three coefficient
    /// equations that together are equivalent to associativity.
    pub fn validate(&self) -> Result<(), ConstructionError> {
        let all = self.x.iter().chain(&self.y).chain(&self.z);
        if let Some(neg) = all.clone().find(|w| w.is_negative()) {
            return Err(ConstructionError::Constraint {
                equation: "all parameters >= 0",
                detail: format!("found {neg}"),
            });
        }
        let sums: [(&'static str, Rational); 3] = [
            ("x1 + x2 + x3 = 1", self.x.iter().sum()),
            ("y1 + y2 + y3 = 1", self.y.iter().sum()),
            ("z1 + z2 = 1", self.z.iter().sum()),
        ];
        for (equation, total) in sums {
            if !total.is_one() {
                return Err(ConstructionError::Constraint {
                    equation,
                    detail: format!("sum is {total}"),
                });
            }
        }
        let [x1, _, x3] = &self.x;
        let [y1, y2, _] = &self.y;
        let [z1, z2] = &self.z;
        let (lhs, rhs) = (y1 * x3, z1 * x1);
        if lhs != rhs {
            return Err(ConstructionError::Constraint {
                equation: "y1*x3 = z1*x1",
                detail: format!("{lhs} != {rhs}"),
            });
        }
        // Coefficient of e in (p_a*p_b)*p_b = p_a*(p_b*p_b). The first equation
        // alone does not give associativity.
        let (lhs, rhs) = (x1 * y2, y1 * z2);
        if lhs != rhs {
            return Err(ConstructionError::Constraint {
                equation: "x1*y2 = y1*z2",
                detail: format!("{lhs} != {rhs}"),
            });
        }
        // Follows from the other two unless x1 or y1 vanishes.
        let (lhs, rhs) = (x3 * y2, z1 * z2);
        if lhs != rhs {
            return Err(ConstructionError::Constraint {
                equation: "x3*y2 = z1*z2",
                detail: format!("{lhs} != {rhs}"),
            });
        }
        Ok(())
    }
}

/// Builds the three-point table without checking any constraint.
pub fn three_element_table_unchecked(params: &ThreeElementParams) -> FiniteSemihypergroup {
    const E: Elem = 0;
    const A: Elem = 1;
    const B: Elem = 2;
    let names = ["e", "a", "b"].iter().map(|s| s.to_string()).collect();
    let combo =
        |ws: &[(Elem, &Rational)]| Measure::from_terms(ws.iter().map(|&(p, w)| (p, w.clone())));
    let [x1, x2, x3] = &params.x;
    let [y1, y2, y3] = &params.y;
    let [z1, z2] = &params.z;
    FiniteSemihypergroup::from_fn("T3", names, |p, q| match (p, q) {
        (E, r) | (r, E) => Measure::point_mass(r),
        (A, A) => combo(&[(E, x1), (A, x2), (B, x3)]),
        (B, B) => combo(&[(E, y1), (A, y2), (B, y3)]),
        _ => combo(&[(A, z1), (B, z2)]),
    })
    .expect("three-point table")
}

/// Validated three-point commutative structure with identity `e`.
pub fn three_element_hypergroup(
    params: &ThreeElementParams,
) -> Result<FiniteSemihypergroup, ConstructionError> {
    params.validate()?;
    Ok(three_element_table_unchecked(params))
}

fn block_name(g: &FiniteGroup, block: &[Elem]) -> String {
    let parts: Vec<&str> = block.iter().map(|&x| g.element_name(x)).collect();
    format!("{{{}}}", parts.join(","))
}

/// A partition of a group's points, with a lookup from point to block.
struct Partition {
    blocks: Vec<Vec<Elem>>,
    block_of: Vec<usize>,
}

impl Partition {
    fn from_blocks(n: usize, blocks: Vec<Vec<Elem>>) -> Self {
        let mut block_of = vec![usize::MAX; n];
        for (i, b) in blocks.iter().enumerate() {
            for &x in b {
                block_of[x] = i;
            }
        }
        Partition { blocks, block_of }
    }

    /// Groups `0..n` by `key`, blocks ordered by smallest member.
    fn by_key<K: PartialEq, F: Fn(Elem) -> K>(n: usize, key: F) -> Self {
        let mut blocks: Vec<(K, Vec<Elem>)> = Vec::new();
        for x in 0..n {
            let k = key(x);
            match blocks.iter_mut().find(|(bk, _)| *bk == k) {
                Some((_, b)) => b.push(x),
                None => blocks.push((k, vec![x])),
            }
        }
        Self::from_blocks(n, blocks.into_iter().map(|(_, b)| b).collect())
    }
}

/// Builds the quotient table from a representative-level rule, checking that
/// every choice of representatives gives the same measure, then verifying the
/// axioms.
fn quotient_structure<F>(
    name: String,
    g: &FiniteGroup,
    part: &Partition,
    rule: F,
) -> Result<FiniteSemihypergroup, ConstructionError>
where
    F: Fn(Elem, Elem) -> Measure<usize>,
{
    let names: Vec<String> = part.blocks.iter().map(|b| block_name(g, b)).collect();
    let k = part.blocks.len();
    let mut table = Vec::with_capacity(k);
    for (i, bx) in part.blocks.iter().enumerate() {
        let mut row = Vec::with_capacity(k);
        for (j, by) in part.blocks.iter().enumerate() {
            let first = rule(bx[0], by[0]);
            for &x in bx {
                for &y in by {
                    let other = rule(x, y);
                    if other != first {
                        let render =
                            |m: &Measure<usize>| m.pushforward(|&b| names[b].clone()).to_string();
                        return Err(ConstructionError::RepresentativeDependence {
                            x: names[i].clone(),
                            y: names[j].clone(),
                            first: render(&first),
                            second: render(&other),
                        });
                    }
                }
            }
            row.push(first);
        }
        table.push(row);
    }
    let structure = FiniteSemihypergroup::from_table(name, names, table)?;
    let report = structure.verify_axioms();
    match report.violations.first() {
        None => Ok(structure),
        Some(v) => Err(ConstructionError::Axioms(v.describe(&structure))),
    }
}

fn uniform_weight(count: usize) -> Rational {
    Rational::new(1, count as i64)
}

/// Left cosets `G/H` with `p_{xH} * p_{yH} = (1/|H|) Σ_{t∈H} p_{(xty)H}`.
///
/// The coset `H` is a right identity; in general there is no two-sided one.
pub fn coset_space(
    g: &FiniteGroup,
    subgroup: &[Elem],
) -> Result<FiniteSemihypergroup, ConstructionError> {
    let h = g.subgroup(subgroup)?;
    let n = g.order();
    let coset_of = |x: Elem| {
        let mut c: Vec<Elem> = h.iter().map(|&t| g.mul(x, t)).collect();
        c.sort_unstable();
        c
    };
    let part = Partition::by_key(n, coset_of);
    let w = uniform_weight(h.len());
    quotient_structure(format!("{}/H", g.name()), g, &part, |x, y| {
        Measure::from_terms(
            h.iter()
                .map(|&t| (part.block_of[g.mul(g.mul(x, t), y)], w.clone())),
        )
    })
}

/// Double cosets `G//H` with `p_{HxH} * p_{HyH} = (1/|H|) Σ_{t∈H} p_{H(xty)H}`.
///
/// Double cosets are identified by their sorted element sets.
pub fn double_coset_space(
    g: &FiniteGroup,
    subgroup: &[Elem],
) -> Result<FiniteSemihypergroup, ConstructionError> {
    let h = g.subgroup(subgroup)?;
    let n = g.order();
    let double_coset_of = |x: Elem| {
        let mut c: Vec<Elem> = h
            .iter()
            .flat_map(|&s| h.iter().map(move |&t| (s, t)))
            .map(|(s, t)| g.mul(g.mul(s, x), t))
            .collect();
        c.sort_unstable();
        c.dedup();
        c
    };
    let part = Partition::by_key(n, double_coset_of);
    let w = uniform_weight(h.len());
    quotient_structure(format!("{}//H", g.name()), g, &part, |x, y| {
        Measure::from_terms(
            h.iter()
                .map(|&t| (part.block_of[g.mul(g.mul(x, t), y)], w.clone())),
        )
    })
}

/// Orbits of `π` with
/// `p_{x^H} * p_{y^H} = (1/|H|²) Σ_{s,t∈H} p_{(π(s,x)·π(t,y))^H}`.
///
/// Any genuine group action is accepted; representative independence and the
/// axioms are verified afterwards, with a witness on failure.
pub fn orbit_space(action: &GroupAction) -> Result<FiniteSemihypergroup, ConstructionError> {
    let g = action.space();
    let hs = action.actors().order();
    let part = Partition::from_blocks(g.order(), action.orbits());
    let w = uniform_weight(hs * hs);
    quotient_structure(
        format!("{}/{}", g.name(), action.actors().name()),
        g,
        &part,
        |x, y| {
            Measure::from_terms(
                (0..hs)
                    .flat_map(|s| (0..hs).map(move |t| (s, t)))
                    .map(|(s, t)| {
                        (
                            part.block_of[g.mul(action.act(s, x), action.act(t, y))],
                            w.clone(),
                        )
                    }),
            )
        },
    )
}

/// All finite words over an alphabet under concatenation, including the empty
/// word. The carrier is infinite, so it is only exposed lazily.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeWords {
    alphabet: Vec<String>,
}

/// A word over [`FreeWords`]'s alphabet, as letter indices.
pub type FreeWord = Vec<usize>;

impl FreeWords {
    /// `None` for an empty alphabet.
    pub fn new(alphabet: Vec<String>) -> Option<Self> {
        (!alphabet.is_empty()).then_some(FreeWords { alphabet })
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn word(&self, letters: &[&str]) -> Option<FreeWord> {
        letters
            .iter()
            .map(|l| self.alphabet.iter().position(|a| a == l))
            .collect()
    }

    pub fn render(&self, w: &FreeWord) -> String {
        if w.is_empty() {
            "e".to_string()
        } else {
            format!(
                "({})",
                w.iter()
                    .map(|&i| self.alphabet[i].as_str())
                    .collect::<String>()
            )
        }
    }

    /// All words of length at most `max_len`, shortest first.
    pub fn words_up_to(&self, max_len: usize) -> Vec<FreeWord> {
        let mut out = vec![Vec::new()];
        let mut layer = vec![Vec::new()];
        for _ in 0..max_len {
            layer = layer
                .iter()
                .flat_map(|w: &FreeWord| {
                    (0..self.alphabet.len()).map(move |a| {
                        let mut next = w.clone();
                        next.push(a);
                        next
                    })
                })
                .collect();
            out.extend(layer.iter().cloned());
        }
        out
    }
}

impl PointConvolution<FreeWord> for FreeWords {
    fn convolve_points(&self, x: &FreeWord, y: &FreeWord) -> Option<Measure<FreeWord>> {
        let n = self.alphabet.len();
        if x.iter().chain(y).any(|&l| l >= n) {
            return None;
        }
        let mut w = x.clone();
        w.extend_from_slice(y);
        Some(Measure::point_mass(w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::convolve_extend;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn params(v: [(i64, i64); 8]) -> ThreeElementParams {
        let r: Vec<Rational> = v.iter().map(|&(n, d)| q(n, d)).collect();
        ThreeElementParams::from_slice(&r).unwrap()
    }

    #[test]
    fn semigroup_examples() {
        let z2 = from_semigroup("Z2", names(&["e", "g"]), vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(z2.product(1, 1), &Measure::point_mass(0));
        assert_eq!(z2.identity(), Some(0));

        let lz = from_semigroup("L", names(&["a", "b"]), vec![vec![0, 0], vec![1, 1]]).unwrap();
        assert!(lz.verify_axioms().passed());
        assert_eq!(lz.identity(), None);
        assert!(lz.is_pure());

        let err =
            from_semigroup("N", names(&["a", "b"]), vec![vec![1, 0], vec![0, 0]]).unwrap_err();
        assert!(matches!(err, ConstructionError::NotAssociative { .. }));
    }

    #[test]
    fn s3_as_semihypergroup() {
        let s3 = from_group(&FiniteGroup::symmetric(3));
        let report = s3.verify_axioms();
        assert!(report.passed());
        assert_eq!(report.triples_checked, 216);
        assert_eq!(s3.identity(), s3.index_of("e"));
        assert!(!s3.is_pure());
    }

    #[test]
    fn three_element_constraints() {
        let good = params([
            (1, 3),
            (1, 6),
            (1, 2),
            (1, 3),
            (1, 2),
            (1, 6),
            (1, 2),
            (1, 2),
        ]);
        let t = three_element_hypergroup(&good).unwrap();
        assert!(t.verify_axioms().passed());
        assert_eq!(t.identity(), Some(0));
        assert!(t.is_pure());

        let bad_sum = params([
            (1, 2),
            (1, 2),
            (1, 2),
            (1, 3),
            (1, 2),
            (1, 6),
            (1, 2),
            (1, 2),
        ]);
        assert!(matches!(
            three_element_hypergroup(&bad_sum),
            Err(ConstructionError::Constraint {
                equation: "x1 + x2 + x3 = 1",
                ..
            })
        ));

        let perturbed = params([
            (1, 3),
            (1, 3),
            (1, 3),
            (1, 4),
            (1, 2),
            (1, 4),
            (1, 2),
            (1, 2),
        ]);
        match three_element_hypergroup(&perturbed) {
            Err(ConstructionError::Constraint { equation, detail }) => {
                assert_eq!(equation, "y1*x3 = z1*x1");
                assert_eq!(detail, "1/12 != 1/6");
            }
            other => panic!("unexpected {other:?}"),
        }

        let negative = params([
            (4, 3),
            (-1, 3),
            (0, 1),
            (1, 3),
            (1, 2),
            (1, 6),
            (1, 2),
            (1, 2),
        ]);
        assert!(matches!(
            three_element_hypergroup(&negative),
            Err(ConstructionError::Constraint {
                equation: "all parameters >= 0",
                ..
            })
        ));
    }

    #[test]
    fn first_equation_alone_is_not_enough() {
        // satisfies y1*x3 = z1*x1 but not x1*y2 = y1*z2
        let p = params([
            (1, 3),
            (1, 3),
            (1, 3),
            (1, 2),
            (1, 4),
            (1, 4),
            (1, 2),
            (1, 2),
        ]);
        assert!(matches!(
            three_element_hypergroup(&p),
            Err(ConstructionError::Constraint {
                equation: "x1*y2 = y1*z2",
                ..
            })
        ));
        let report = three_element_table_unchecked(&p).verify_axioms();
        assert!(report.probability_passed());
        let (left, right) = report.associativity_violation(1, 2, 2).unwrap();
        assert_eq!(left.weight(&0), q(1, 4));
        assert_eq!(right.weight(&0), q(1, 12));
    }

    #[test]
    fn degenerate_members_need_the_third_equation() {
        // a*a = b*b = b: the first two equations hold trivially
        let p = params([
            (0, 1),
            (0, 1),
            (1, 1),
            (0, 1),
            (0, 1),
            (1, 1),
            (1, 6),
            (5, 6),
        ]);
        assert!(matches!(
            three_element_hypergroup(&p),
            Err(ConstructionError::Constraint {
                equation: "x3*y2 = z1*z2",
                ..
            })
        ));
        let report = three_element_table_unchecked(&p).verify_axioms();
        assert!(report.associativity_violation(1, 1, 2).is_some());
        // with z1 = 0 the same shape is a semigroup
        let ok = params([
            (0, 1),
            (0, 1),
            (1, 1),
            (0, 1),
            (0, 1),
            (1, 1),
            (0, 1),
            (1, 1),
        ]);
        assert!(three_element_hypergroup(&ok)
            .unwrap()
            .verify_axioms()
            .passed());
    }

    #[test]
    fn perturbed_table_fails_at_aab() {
        let p = params([
            (1, 3),
            (1, 3),
            (1, 3),
            (1, 4),
            (1, 2),
            (1, 4),
            (1, 2),
            (1, 2),
        ]);
        let report = three_element_table_unchecked(&p).verify_axioms();
        let (left, right) = report.associativity_violation(1, 1, 2).unwrap();
        assert_eq!(left.weight(&0), q(1, 12));
        assert_eq!(right.weight(&0), q(1, 6));
    }

    fn s3_h() -> (FiniteGroup, Vec<Elem>) {
        let s3 = FiniteGroup::symmetric(3);
        let h = s3.subgroup_by_names(&["e", "(12)"]).unwrap();
        (s3, h)
    }

    #[test]
    fn s3_coset_space() {
        let (s3, h) = s3_h();
        let k = coset_space(&s3, &h).unwrap();
        assert_eq!(k.elements(), ["{e,(12)}", "{(13),(123)}", "{(23),(132)}"]);
        let (hc, c13, c23) = (0, 1, 2);
        assert_eq!(
            k.product(c13, c23),
            &Measure::from_terms([(c23, q(1, 2)), (hc, q(1, 2))])
        );
        assert_eq!(k.identity(), None);
        assert_eq!(k.right_identity(), Some(hc));
        assert!(k.is_pure());
    }

    #[test]
    fn z4_quotients() {
        let z4 = FiniteGroup::cyclic(4);
        let h = z4.subgroup_by_names(&["0", "2"]).unwrap();
        let k = coset_space(&z4, &h).unwrap();
        assert_eq!(k.elements(), ["{0,2}", "{1,3}"]);
        assert_eq!(k.product(1, 1), &Measure::point_mass(0));
        assert_eq!(k.identity(), Some(0));

        let d = double_coset_space(&z4, &h).unwrap();
        let z2 = from_group(&FiniteGroup::cyclic(2));
        assert_eq!(d.relabeled(names(&["0", "1"])).unwrap().with_name("Z2"), z2);
    }

    #[test]
    fn s3_double_coset_space() {
        let (s3, h) = s3_h();
        let t2 = double_coset_space(&s3, &h).unwrap();
        assert_eq!(t2.len(), 2);
        assert_eq!(t2.element_name(0), "{e,(12)}");
        assert_eq!(t2.identity(), Some(0));
        assert_eq!(
            t2.product(1, 1),
            &Measure::from_terms([(0, q(1, 2)), (1, q(1, 2))])
        );
        assert!(t2.is_pure());
    }

    #[test]
    fn trivial_subgroup_recovers_group() {
        for g in [FiniteGroup::symmetric(3), FiniteGroup::cyclic(5)] {
            let trivial = [g.identity()];
            let expected = from_group(&g);
            for k in [
                coset_space(&g, &trivial).unwrap(),
                double_coset_space(&g, &trivial).unwrap(),
            ] {
                let renamed = k
                    .relabeled(g.elements().to_vec())
                    .unwrap()
                    .with_name(g.name());
                assert_eq!(renamed, expected);
            }
            let orbits =
                orbit_space(&GroupAction::trivial(FiniteGroup::cyclic(3), g.clone())).unwrap();
            assert_eq!(
                orbits
                    .relabeled(g.elements().to_vec())
                    .unwrap()
                    .with_name(g.name()),
                expected
            );
        }
    }

    #[test]
    fn not_a_subgroup() {
        let (s3, _) = s3_h();
        assert!(matches!(
            coset_space(&s3, &[1]),
            Err(ConstructionError::Group(GroupError::NotSubgroup(_)))
        ));
        assert!(double_coset_space(&s3, &[0, 1, 2]).is_err());
    }

    #[test]
    fn negation_orbit_spaces() {
        let z3 = orbit_space(&GroupAction::inversion(FiniteGroup::cyclic(3)).unwrap()).unwrap();
        assert_eq!(z3.elements(), ["{0}", "{1,2}"]);
        assert_eq!(
            z3.product(1, 1),
            &Measure::from_terms([(0, q(1, 2)), (1, q(1, 2))])
        );
        assert!(z3.is_pure());

        let z4 = orbit_space(&GroupAction::inversion(FiniteGroup::cyclic(4)).unwrap()).unwrap();
        assert_eq!(z4.elements(), ["{0}", "{1,3}", "{2}"]);
        assert_eq!(
            z4.product(1, 1),
            &Measure::from_terms([(0, q(1, 2)), (2, q(1, 2))])
        );
    }

    #[test]
    fn non_automorphic_action_is_rejected_with_witness() {
        // Z2 swapping the points 0 and 1 of Z5: a genuine action, but not by
        // automorphisms, and the averaged product is not associative.
        let swap = |x: Elem| match x {
            0 => 1,
            1 => 0,
            other => other,
        };
        let action =
            GroupAction::from_fn(FiniteGroup::cyclic(2), FiniteGroup::cyclic(5), |h, x| {
                if h == 0 {
                    x
                } else {
                    swap(x)
                }
            })
            .unwrap();
        let err = orbit_space(&action).unwrap_err();
        match err {
            ConstructionError::Axioms(witness) => assert!(
                witness.starts_with("A1: triple ({0,1}, {0,1}, {2})"),
                "{witness}"
            ),
            other => panic!("unexpected {other:?}"),
        }

        // Z2 swapping 0<->1 and 2<->3 of Z4 happens to be admissible.
        let action =
            GroupAction::from_fn(FiniteGroup::cyclic(2), FiniteGroup::cyclic(4), |h, x| {
                if h == 0 {
                    x
                } else {
                    x ^ 1
                }
            })
            .unwrap();
        let k = orbit_space(&action).unwrap();
        assert_eq!(
            k.product(0, 0),
            &Measure::from_terms([(0, q(3, 4)), (1, q(1, 4))])
        );
    }

    #[test]
    fn free_words() {
        let f = FreeWords::new(names(&["a", "b"])).unwrap();
        let ab = f.word(&["a", "b"]).unwrap();
        let ba = f.word(&["b", "a"]).unwrap();
        let prod = f.convolve_points(&ab, &ba).unwrap();
        assert_eq!(
            prod,
            Measure::point_mass(f.word(&["a", "b", "b", "a"]).unwrap())
        );
        assert_eq!(f.render(prod.as_point_mass().unwrap()), "(abba)");

        let e: FreeWord = vec![];
        for w in f.words_up_to(3) {
            assert_eq!(
                f.convolve_points(&e, &w).unwrap(),
                Measure::point_mass(w.clone())
            );
            assert_eq!(
                f.convolve_points(&w, &e).unwrap(),
                Measure::point_mass(w.clone())
            );
        }
        assert_eq!(f.words_up_to(2).len(), 7);
        assert!(FreeWords::new(vec![]).is_none());

        // associativity on a truncation
        let words = f.words_up_to(2);
        for x in &words {
            for y in &words {
                for z in &words {
                    let px = Measure::point_mass(x.clone());
                    let pz = Measure::point_mass(z.clone());
                    let xy = f.convolve_points(x, y).unwrap();
                    let yz = f.convolve_points(y, z).unwrap();
                    assert_eq!(
                        convolve_extend(&xy, &pz, &f).unwrap(),
                        convolve_extend(&px, &yz, &f).unwrap()
                    );
                }
            }
        }
    }
}
