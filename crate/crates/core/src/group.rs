//! Finite groups given by Cayley tables, and group actions.

use std::collections::HashMap;

use thiserror::Error;

use crate::shg::Elem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group has no elements")]
    Empty,
    #[error("duplicate element name `{0}`")]
    DuplicateElement(String),
    #[error("Cayley table has {found} rows/columns, expected {expected}")]
    TableShape { expected: usize, found: usize },
    #[error("Cayley table entry ({x}, {y}) = index {index} is not an element")]
    NotClosed { x: String, y: String, index: usize },
    #[error("operation is not associative at ({x}, {y}, {z})")]
    NotAssociative { x: String, y: String, z: String },
    #[error("no identity element")]
    NoIdentity,
    #[error("element `{0}` has no inverse")]
    NoInverse(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("subset is not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("action table must be {actors} x {points}")]
    ActionShape { actors: usize, points: usize },
    #[error("action value pi({h}, {x}) = index {index} is not a point")]
    ActionOutOfRange { h: String, x: String, index: usize },
    #[error("identity does not act trivially: pi(e, {0}) != {0}")]
    ActionIdentity(String),
    #[error("action is not compatible at ({h1}, {h2}, {x}): pi(h1*h2, x) != pi(h1, pi(h2, x))")]
    ActionCompatibility { h1: String, h2: String, x: String },
}

/// A finite group with a dense Cayley table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    elements: Vec<String>,
    table: Vec<Elem>,
    identity: Elem,
    inverse: Vec<Elem>,
}

fn check_names(elements: &[String]) -> Result<(), GroupError> {
    if elements.is_empty() {
        return Err(GroupError::Empty);
    }
    let mut seen = HashMap::new();
    for e in elements {
        if seen.insert(e.as_str(), ()).is_some() {
            return Err(GroupError::DuplicateElement(e.clone()));
        }
    }
    Ok(())
}

/// Validates a square operation table and returns it flattened.
pub(crate) fn flatten_cayley(
    elements: &[String],
    table: Vec<Vec<Elem>>,
) -> Result<Vec<Elem>, GroupError> {
    check_names(elements)?;
    let n = elements.len();
    if table.len() != n {
        return Err(GroupError::TableShape {
            expected: n,
            found: table.len(),
        });
    }
    let mut flat = Vec::with_capacity(n * n);
    for (x, row) in table.into_iter().enumerate() {
        if row.len() != n {
            return Err(GroupError::TableShape {
                expected: n,
                found: row.len(),
            });
        }
        for (y, z) in row.into_iter().enumerate() {
            if z >= n {
                return Err(GroupError::NotClosed {
                    x: elements[x].clone(),
                    y: elements[y].clone(),
                    index: z,
                });
            }
            flat.push(z);
        }
    }
    Ok(flat)
}

/// First `(x, y, z)` with `(xy)z != x(yz)` in a flattened table.
pub(crate) fn associativity_witness(n: usize, flat: &[Elem]) -> Option<(Elem, Elem, Elem)> {
    let mul = |a: Elem, b: Elem| flat[a * n + b];
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if mul(mul(x, y), z) != mul(x, mul(y, z)) {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

impl FiniteGroup {
    /// Validates closure, associativity, identity and inverses.
    pub fn from_cayley(
        name: impl Into<String>,
        elements: Vec<String>,
        table: Vec<Vec<Elem>>,
    ) -> Result<Self, GroupError> {
        let flat = flatten_cayley(&elements, table)?;
        let n = elements.len();
        if let Some((x, y, z)) = associativity_witness(n, &flat) {
            return Err(GroupError::NotAssociative {
                x: elements[x].clone(),
                y: elements[y].clone(),
                z: elements[z].clone(),
            });
        }
        let mul = |a: Elem, b: Elem| flat[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mul(e, x) == x && mul(x, e) == x))
            .ok_or(GroupError::NoIdentity)?;
        let inverse = (0..n)
            .map(|x| {
                (0..n)
                    .find(|&y| mul(x, y) == identity && mul(y, x) == identity)
                    .ok_or_else(|| GroupError::NoInverse(elements[x].clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FiniteGroup {
            name: name.into(),
            elements,
            table: flat,
            identity,
            inverse,
        })
    }

    /// `Z_n` with elements named `"0"`, ..., `"n-1"`.
    pub fn cyclic(n: usize) -> Self {
        let elements = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n)
            .map(|x| (0..n).map(|y| (x + y) % n).collect())
            .collect();
        Self::from_cayley(format!("Z{n}"), elements, table).expect("cyclic group")
    }

    /// Closes a list of permutations of `0..degree` (given as image vectors)
    /// under composition. Names use cycle notation on `1..=degree`, with `e`
    /// for the identity. Products compose right to left: `(στ)(i) = σ(τ(i))`.
    pub fn generated_by_permutations(
        name: impl Into<String>,
        degree: usize,
        generators: &[Vec<usize>],
    ) -> Self {
        let identity: Vec<usize> = (0..degree).collect();
        let mut perms = vec![identity];
        let mut frontier = 0;
        while frontier < perms.len() {
            let p = perms[frontier].clone();
            for g in generators {
                let next: Vec<usize> = (0..degree).map(|i| g[p[i]]).collect();
                if !perms.contains(&next) {
                    perms.push(next);
                }
            }
            frontier += 1;
        }
        Self::from_permutation_list(name, perms)
    }

    /// `S_n` as all permutations of `n` points, in a fixed order: identity,
    /// then by cycle-notation name length and text.
    pub fn symmetric(n: usize) -> Self {
        Self::from_permutation_list(format!("S{n}"), all_permutations(n))
    }

    /// Even permutations of `n` points.
    pub fn alternating(n: usize) -> Self {
        let perms = all_permutations(n)
            .into_iter()
            .filter(|p| is_even(p))
            .collect();
        Self::from_permutation_list(format!("A{n}"), perms)
    }

    /// Dihedral group of the `n`-gon as permutations of its vertices.
    pub fn dihedral(n: usize) -> Self {
        let rotation: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let reflection: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        Self::generated_by_permutations(format!("D{n}"), n, &[rotation, reflection])
    }

    fn from_permutation_list(name: impl Into<String>, mut perms: Vec<Vec<usize>>) -> Self {
        perms.sort_by_key(|p| {
            let label = cycle_notation(p);
            (label != "e", label.len(), label)
        });
        let index: HashMap<&Vec<usize>, usize> =
            perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let table = perms
            .iter()
            .map(|s| {
                perms
                    .iter()
                    .map(|t| {
                        let st: Vec<usize> = t.iter().map(|&i| s[i]).collect();
                        index[&st]
                    })
                    .collect()
            })
            .collect();
        let elements = perms.iter().map(|p| cycle_notation(p)).collect();
        Self::from_cayley(name, elements, table).expect("permutation group")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element_name(&self, x: Elem) -> &str {
        &self.elements[x]
    }

    pub fn elem(&self, name: &str) -> Result<Elem, GroupError> {
        self.elements
            .iter()
            .position(|e| e == name)
            .ok_or_else(|| GroupError::UnknownElement(name.to_string()))
    }

    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.table[x * self.order() + y]
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    pub fn inverse(&self, x: Elem) -> Elem {
        self.inverse[x]
    }

    /// Cayley table rows, `table[x][y] = x·y`.
    pub fn cayley_rows(&self) -> Vec<Vec<Elem>> {
        self.table
            .chunks(self.order())
            .map(|r| r.to_vec())
            .collect()
    }

    /// Sorted, deduplicated subgroup element list, or an error explaining why
    /// the subset is not a subgroup.
    pub fn subgroup(&self, subset: &[Elem]) -> Result<Vec<Elem>, GroupError> {
        let mut h: Vec<Elem> = subset.to_vec();
        h.sort_unstable();
        h.dedup();
        if let Some(&bad) = h.iter().find(|&&x| x >= self.order()) {
            return Err(GroupError::NotSubgroup(format!(
                "index {bad} is not an element"
            )));
        }
        if !h.contains(&self.identity) {
            return Err(GroupError::NotSubgroup(format!(
                "missing the identity `{}`",
                self.elements[self.identity]
            )));
        }
        for &x in &h {
            for &y in &h {
                let xy = self.mul(x, y);
                if h.binary_search(&xy).is_err() {
                    return Err(GroupError::NotSubgroup(format!(
                        "{} * {} = {} is outside the subset",
                        self.elements[x], self.elements[y], self.elements[xy]
                    )));
                }
            }
        }
        Ok(h)
    }

    pub fn subgroup_by_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<Elem>, GroupError> {
        let idx = names
            .iter()
            .map(|n| self.elem(n.as_ref().trim()))
            .collect::<Result<Vec<_>, _>>()?;
        self.subgroup(&idx)
    }
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn is_even(p: &[usize]) -> bool {
    let inversions = (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count();
    inversions % 2 == 0
}

/// Cycle notation on points `1..=n`, e.g. `(12)(34)`; `e` for the identity.
pub fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            out.push_str(&(i + 1).to_string());
            i = p[i];
        }
        out.push(')');
    }
    if out.is_empty() {
        "e".to_string()
    } else {
        out
    }
}

/// A left action `π : H × G → G` of a finite group on the points of another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    actors: FiniteGroup,
    space: FiniteGroup,
    table: Vec<Elem>,
}

impl GroupAction {
    /// `table[h][x] = π(h, x)`; checks `π(e, x) = x` and
    /// `π(h₁h₂, x) = π(h₁, π(h₂, x))`.
    pub fn new(
        actors: FiniteGroup,
        space: FiniteGroup,
        table: Vec<Vec<Elem>>,
    ) -> Result<Self, GroupError> {
        let (m, n) = (actors.order(), space.order());
        let shape = GroupError::ActionShape {
            actors: m,
            points: n,
        };
        if table.len() != m || table.iter().any(|r| r.len() != n) {
            return Err(shape);
        }
        let flat: Vec<Elem> = table.into_iter().flatten().collect();
        for h in 0..m {
            for x in 0..n {
                let v = flat[h * n + x];
                if v >= n {
                    return Err(GroupError::ActionOutOfRange {
                        h: actors.element_name(h).to_string(),
                        x: space.element_name(x).to_string(),
                        index: v,
                    });
                }
            }
        }
        let act = |h: Elem, x: Elem| flat[h * n + x];
        for x in 0..n {
            if act(actors.identity(), x) != x {
                return Err(GroupError::ActionIdentity(
                    space.element_name(x).to_string(),
                ));
            }
        }
        for h1 in 0..m {
            for h2 in 0..m {
                for x in 0..n {
                    if act(actors.mul(h1, h2), x) != act(h1, act(h2, x)) {
                        return Err(GroupError::ActionCompatibility {
                            h1: actors.element_name(h1).to_string(),
                            h2: actors.element_name(h2).to_string(),
                            x: space.element_name(x).to_string(),
                        });
                    }
                }
            }
        }
        Ok(GroupAction {
            actors,
            space,
            table: flat,
        })
    }

    pub fn from_fn<F: Fn(Elem, Elem) -> Elem>(
        actors: FiniteGroup,
        space: FiniteGroup,
        f: F,
    ) -> Result<Self, GroupError> {
        let table = (0..actors.order())
            .map(|h| (0..space.order()).map(|x| f(h, x)).collect())
            .collect();
        Self::new(actors, space, table)
    }

    /// The trivial action of `actors` on `space`.
    pub fn trivial(actors: FiniteGroup, space: FiniteGroup) -> Self {
        Self::from_fn(actors, space, |_, x| x).expect("trivial action")
    }

    /// `Z2` acting on `space` by inversion, `π(1, x) = x⁻¹`.
    pub fn inversion(space: FiniteGroup) -> Result<Self, GroupError> {
        let inv = space.clone();
        Self::from_fn(FiniteGroup::cyclic(2), space, move |h, x| {
            if h == 0 {
                x
            } else {
                inv.inverse(x)
            }
        })
    }

    pub fn actors(&self) -> &FiniteGroup {
        &self.actors
    }

    pub fn space(&self) -> &FiniteGroup {
        &self.space
    }

    pub fn act(&self, h: Elem, x: Elem) -> Elem {
        self.table[h * self.space.order() + x]
    }

    /// Orbits ordered by their smallest point; each orbit sorted.
    pub fn orbits(&self) -> Vec<Vec<Elem>> {
        let n = self.space.order();
        let mut assigned = vec![false; n];
        let mut out = Vec::new();
        for x in 0..n {
            if assigned[x] {
                continue;
            }
            let mut orbit: Vec<Elem> = (0..self.actors.order()).map(|h| self.act(h, x)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                assigned[y] = true;
            }
            out.push(orbit);
        }
        out
    }
}
