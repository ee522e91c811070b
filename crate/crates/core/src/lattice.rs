//! Finite lattices with decision procedures for the properties of quantum
//! logic: distributivity, modularity, orthocomplementation, de Morgan laws,
//! orthomodularity (by two independent procedures), centers, Boolean
//! subalgebras, and isomorphism search.

// index loops over relation tables read better than iterator chains here
#![allow(clippy::needless_range_loop)]

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum element count for the brute-force isomorphism search.
pub const ISO_SEARCH_MAX: usize = 12;

/// Input form of a lattice: element names, order pairs (covering pairs or the
/// full relation), and an optional orthocomplement map.
///
/// Wire format:
/// `{"elements": ["0","a",...], "leq": [["0","a"],...], "ortho": {"a":"a_perp",...}}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub elements: Vec<String>,
    pub leq: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ortho: Option<BTreeMap<String, String>>,
}

/// Explicit finite lattice: order relation plus precomputed meet/join tables.
///
/// The tables make every property check a sequence of lookups; `n` stays small
/// so the O(n²) storage is immaterial.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteLattice {
    labels: Vec<String>,
    leq: Vec<Vec<bool>>,
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
    bottom: usize,
    top: usize,
    ortho: Option<Vec<usize>>,
}

/// Flags for every checked lattice property, with a counterexample for each
/// failure. Witnesses report the lexicographically first failing tuple.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PropertyReport {
    pub is_lattice: bool,
    pub is_atomic: bool,
    pub is_distributive: bool,
    pub is_modular: bool,
    pub is_orthocomplemented: bool,
    pub de_morgan_holds: bool,
    pub is_orthomodular: bool,
    pub is_boolean: bool,
    pub witnesses: Vec<Witness>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Witness {
    pub property: String,
    pub elements: Vec<String>,
}

/// Outcome of checking the four orthocomplementation clauses.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrthoReport {
    pub valid: bool,
    /// `(clause, elements)` for the first failing clause, clauses ordered
    /// involution, order-reversal, meet-is-zero, join-is-one.
    pub witness: Option<Witness>,
}

/// Boolean subalgebra enumeration result.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BooleanSubalgebras {
    /// Each entry is a sorted list of element indices closed under meet, join,
    /// and orthocomplement, containing bottom and top, and distributive.
    pub subalgebras: Vec<Vec<usize>>,
    /// True iff no returned subalgebra is the whole lattice.
    pub proper_only: bool,
}

/// Builds a [`FiniteLattice`] from named order pairs: computes the transitive
/// closure, rejects cycles, and derives meet/join tables, failing if any pair
/// lacks a unique infimum or supremum.
pub fn build_lattice(spec: &LatticeSpec) -> Result<FiniteLattice> {
    let n = spec.elements.len();
    if n == 0 {
        return Err(Error::Invalid("lattice needs at least one element".into()));
    }
    let mut index: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, name) in spec.elements.iter().enumerate() {
        if index.insert(name.as_str(), i).is_some() {
            return Err(Error::Invalid(format!("duplicate element name `{name}`")));
        }
    }
    let look = |name: &str| -> Result<usize> {
        index
            .get(name)
            .copied()
            .ok_or_else(|| Error::Invalid(format!("undeclared element `{name}`")))
    };

    let mut leq = vec![vec![false; n]; n];
    for (i, row) in leq.iter_mut().enumerate() {
        row[i] = true;
    }
    for (x, y) in &spec.leq {
        leq[look(x)?][look(y)?] = true;
    }

    let ortho = match &spec.ortho {
        None => None,
        Some(map) => {
            let mut perp = vec![usize::MAX; n];
            for (x, y) in map {
                let (i, j) = (look(x)?, look(y)?);
                for (a, b) in [(i, j), (j, i)] {
                    if perp[a] != usize::MAX && perp[a] != b {
                        return Err(Error::Invalid(format!(
                            "conflicting orthocomplement for `{}`",
                            spec.elements[a]
                        )));
                    }
                    perp[a] = b;
                }
            }
            if let Some(miss) = perp.iter().position(|&p| p == usize::MAX) {
                return Err(Error::Invalid(format!(
                    "orthocomplement map does not cover `{}`",
                    spec.elements[miss]
                )));
            }
            Some(perp)
        }
    };

    FiniteLattice::from_leq(spec.elements.clone(), leq, ortho)
}

impl FiniteLattice {
    /// Builds the lattice from a raw order relation (its reflexive-transitive
    /// closure is taken first).
    pub fn from_leq(
        labels: Vec<String>,
        mut leq: Vec<Vec<bool>>,
        ortho: Option<Vec<usize>>,
    ) -> Result<Self> {
        let n = labels.len();
        // Warshall transitive closure
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            leq[i][i] = true;
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::NotAPoset {
                        element: labels[i].clone(),
                    });
                }
            }
        }

        let mut meet = vec![vec![0usize; n]; n];
        let mut join = vec![vec![0usize; n]; n];
        for i in 0..n {
            for j in 0..n {
                meet[i][j] = Self::bound(&leq, i, j, true).ok_or_else(|| Error::NotALattice {
                    x: labels[i].clone(),
                    y: labels[j].clone(),
                    which: "infimum".into(),
                })?;
                join[i][j] = Self::bound(&leq, i, j, false).ok_or_else(|| Error::NotALattice {
                    x: labels[i].clone(),
                    y: labels[j].clone(),
                    which: "supremum".into(),
                })?;
            }
        }
        let bottom = (0..n).fold(0, |acc, k| meet[acc][k]);
        let top = (0..n).fold(0, |acc, k| join[acc][k]);

        if let Some(perp) = &ortho {
            if perp.len() != n || perp.iter().any(|&p| p >= n) {
                return Err(Error::Invalid("orthocomplement map has wrong size".into()));
            }
        }

        Ok(FiniteLattice {
            labels,
            leq,
            meet,
            join,
            bottom,
            top,
            ortho,
        })
    }

    /// Greatest lower bound (`lower = true`) or least upper bound of a pair,
    /// if it exists.
    fn bound(leq: &[Vec<bool>], i: usize, j: usize, lower: bool) -> Option<usize> {
        let n = leq.len();
        let bounds: Vec<usize> = (0..n)
            .filter(|&k| {
                if lower {
                    leq[k][i] && leq[k][j]
                } else {
                    leq[i][k] && leq[j][k]
                }
            })
            .collect();
        bounds
            .iter()
            .copied()
            .find(|&m| {
                bounds
                    .iter()
                    .all(|&k| if lower { leq[k][m] } else { leq[m][k] })
            })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.meet[i][j]
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        self.join[i][j]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn has_ortho(&self) -> bool {
        self.ortho.is_some()
    }

    pub fn perp(&self, i: usize) -> Result<usize> {
        Ok(self.ortho.as_ref().ok_or(Error::NoOrthoMap)?[i])
    }

    /// Minimal nonzero elements.
    pub fn atoms(&self) -> Vec<usize> {
        (0..self.n())
            .filter(|&a| {
                a != self.bottom
                    && (0..self.n())
                        .all(|x| !(self.leq[x][a] && x != a && x != self.bottom))
            })
            .collect()
    }

    /// Cartesian product lattice with componentwise order (and ortho when both
    /// factors carry one). Labels are `"x|y"`.
    pub fn product(a: &FiniteLattice, b: &FiniteLattice) -> Result<FiniteLattice> {
        let (na, nb) = (a.n(), b.n());
        let n = na * nb;
        let labels: Vec<String> = (0..n)
            .map(|k| format!("{}|{}", a.labels[k / nb], b.labels[k % nb]))
            .collect();
        let mut leq = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                leq[i][j] = a.leq[i / nb][j / nb] && b.leq[i % nb][j % nb];
            }
        }
        let ortho = match (&a.ortho, &b.ortho) {
            (Some(pa), Some(pb)) => {
                Some((0..n).map(|k| pa[k / nb] * nb + pb[k % nb]).collect())
            }
            _ => None,
        };
        FiniteLattice::from_leq(labels, leq, ortho)
    }

    fn witness(&self, property: &str, elems: &[usize]) -> Witness {
        Witness {
            property: property.into(),
            elements: elems.iter().map(|&e| self.labels[e].clone()).collect(),
        }
    }
}

/// Checks the four orthocomplementation clauses exhaustively.
pub fn validate_ortho(lat: &FiniteLattice) -> Result<OrthoReport> {
    let n = lat.n();
    let perp: Vec<usize> = (0..n).map(|i| lat.perp(i)).collect::<Result<_>>()?;

    for x in 0..n {
        if perp[perp[x]] != x {
            return Ok(OrthoReport {
                valid: false,
                witness: Some(lat.witness("involution", &[x])),
            });
        }
    }
    for x in 0..n {
        for y in 0..n {
            if lat.leq(x, y) != lat.leq(perp[y], perp[x]) {
                return Ok(OrthoReport {
                    valid: false,
                    witness: Some(lat.witness("order_reversal", &[x, y])),
                });
            }
        }
    }
    for x in 0..n {
        if lat.meet(x, perp[x]) != lat.bottom() {
            return Ok(OrthoReport {
                valid: false,
                witness: Some(lat.witness("meet_is_zero", &[x])),
            });
        }
    }
    for x in 0..n {
        if lat.join(x, perp[x]) != lat.top() {
            return Ok(OrthoReport {
                valid: false,
                witness: Some(lat.witness("join_is_one", &[x])),
            });
        }
    }
    Ok(OrthoReport {
        valid: true,
        witness: None,
    })
}

/// Orthomodularity by the definitional identity
/// `x ≤ z ⇒ x ∨ (x⊥ ∧ z) = z`; returns the first failing pair.
pub fn orthomodular_definitional(lat: &FiniteLattice) -> Result<(bool, Option<(usize, usize)>)> {
    let n = lat.n();
    for x in 0..n {
        let px = lat.perp(x)?;
        for z in 0..n {
            if lat.leq(x, z) && lat.join(x, lat.meet(px, z)) != z {
                return Ok((false, Some((x, z))));
            }
        }
    }
    Ok((true, None))
}

/// Orthomodularity by the criterion `x ≤ z and x⊥ ∧ z = 0 imply x = z`;
/// an independent decision procedure that must agree with the definitional one.
pub fn orthomodular_criterion(lat: &FiniteLattice) -> Result<(bool, Option<(usize, usize)>)> {
    let n = lat.n();
    for x in 0..n {
        let px = lat.perp(x)?;
        for z in 0..n {
            if lat.leq(x, z) && lat.meet(px, z) == lat.bottom() && x != z {
                return Ok((false, Some((x, z))));
            }
        }
    }
    Ok((true, None))
}

/// Decides every lattice property by exhaustive enumeration.
pub fn check_properties(lat: &FiniteLattice) -> PropertyReport {
    let n = lat.n();
    let mut witnesses = Vec::new();

    // finite lattices are atomic; still decided by enumeration
    let atoms = lat.atoms();
    let mut is_atomic = true;
    for x in 0..n {
        if x != lat.bottom() && !atoms.iter().any(|&a| lat.leq(a, x)) {
            is_atomic = false;
            witnesses.push(lat.witness("atomicity", &[x]));
            break;
        }
    }

    let mut is_distributive = true;
    'dist: for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if lat.join(x, lat.meet(y, z)) != lat.meet(lat.join(x, y), lat.join(x, z)) {
                    is_distributive = false;
                    witnesses.push(lat.witness("distributivity", &[x, y, z]));
                    break 'dist;
                }
            }
        }
    }

    let mut is_modular = true;
    'modular: for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if lat.leq(x, z) && lat.join(x, lat.meet(y, z)) != lat.meet(lat.join(x, y), z) {
                    is_modular = false;
                    witnesses.push(lat.witness("modularity", &[x, y, z]));
                    break 'modular;
                }
            }
        }
    }

    let ortho_report = if lat.has_ortho() {
        Some(validate_ortho(lat).expect("ortho map present"))
    } else {
        None
    };
    let is_orthocomplemented = ortho_report.as_ref().map(|r| r.valid).unwrap_or(false);
    if let Some(rep) = &ortho_report {
        if let Some(w) = &rep.witness {
            witnesses.push(Witness {
                property: format!("orthocomplementation/{}", w.property),
                elements: w.elements.clone(),
            });
        }
    }

    let mut de_morgan_holds = false;
    let mut is_orthomodular = false;
    if is_orthocomplemented {
        de_morgan_holds = true;
        'dm: for x in 0..n {
            for y in 0..n {
                let (px, py) = (lat.perp(x).unwrap(), lat.perp(y).unwrap());
                let join_law = lat.perp(lat.join(x, y)).unwrap() == lat.meet(px, py);
                let meet_law = lat.perp(lat.meet(x, y)).unwrap() == lat.join(px, py);
                if !join_law || !meet_law {
                    de_morgan_holds = false;
                    witnesses.push(lat.witness("de_morgan", &[x, y]));
                    break 'dm;
                }
            }
        }

        let (om_def, def_wit) = orthomodular_definitional(lat).unwrap();
        let (om_crit, _) = orthomodular_criterion(lat).unwrap();
        assert_eq!(
            om_def, om_crit,
            "orthomodularity decision procedures disagree on an orthocomplemented lattice"
        );
        is_orthomodular = om_def;
        if let Some((x, z)) = def_wit {
            witnesses.push(lat.witness("orthomodularity", &[x, z]));
        }
    }

    PropertyReport {
        is_lattice: true,
        is_atomic,
        is_distributive,
        is_modular,
        is_orthocomplemented,
        de_morgan_holds,
        is_orthomodular,
        is_boolean: is_distributive && is_orthocomplemented,
        witnesses,
    }
}

/// Center of an orthocomplemented lattice (`x = (x∧c)∨(x∧c⊥)` for all `x`)
/// and its irreducibility flag (center = {0, 1}).
pub fn center_and_irreducibility(lat: &FiniteLattice) -> Result<(Vec<usize>, bool)> {
    let n = lat.n();
    if !lat.has_ortho() {
        return Err(Error::NoOrthoMap);
    }
    let center: Vec<usize> = (0..n)
        .filter(|&c| {
            let pc = lat.perp(c).unwrap();
            (0..n).all(|x| lat.join(lat.meet(x, c), lat.meet(x, pc)) == x)
        })
        .collect();
    let trivial: BTreeSet<usize> = [lat.bottom(), lat.top()].into_iter().collect();
    let is_irreducible = center.iter().copied().collect::<BTreeSet<_>>() == trivial;
    Ok((center, is_irreducible))
}

/// Enumerates all Boolean subalgebras: subsets containing 0 and 1, closed
/// under meet/join/orthocomplement, and distributive. Fails once the number of
/// closed subalgebras found exceeds `max_size`.
pub fn boolean_subalgebras(lat: &FiniteLattice, max_size: usize) -> Result<BooleanSubalgebras> {
    let n = lat.n();
    if !lat.has_ortho() {
        return Err(Error::NoOrthoMap);
    }
    if n > 64 {
        // bitmask representation
        return Err(Error::EnumerationBudgetExceeded { budget: 64 });
    }

    let closure = |start: u64| -> u64 {
        let mut s = start;
        loop {
            let mut next = s;
            let members: Vec<usize> = (0..n).filter(|&i| s >> i & 1 == 1).collect();
            for &i in &members {
                next |= 1 << lat.perp(i).unwrap();
                for &j in &members {
                    next |= 1 << lat.meet(i, j);
                    next |= 1 << lat.join(i, j);
                }
            }
            if next == s {
                return s;
            }
            s = next;
        }
    };

    let seed = closure(1 << lat.bottom() | 1 << lat.top());
    let mut all: BTreeSet<u64> = BTreeSet::new();
    all.insert(seed);
    let mut frontier = vec![seed];
    while let Some(s) = frontier.pop() {
        for e in 0..n {
            if s >> e & 1 == 0 {
                let t = closure(s | 1 << e);
                if all.insert(t) {
                    if all.len() > max_size {
                        return Err(Error::EnumerationBudgetExceeded { budget: max_size });
                    }
                    frontier.push(t);
                }
            }
        }
    }

    let is_distributive_within = |s: u64| -> bool {
        let members: Vec<usize> = (0..n).filter(|&i| s >> i & 1 == 1).collect();
        members.iter().all(|&x| {
            members.iter().all(|&y| {
                members.iter().all(|&z| {
                    lat.join(x, lat.meet(y, z)) == lat.meet(lat.join(x, y), lat.join(x, z))
                })
            })
        })
    };

    let mut subalgebras: Vec<Vec<usize>> = all
        .into_iter()
        .filter(|&s| is_distributive_within(s))
        .map(|s| (0..n).filter(|&i| s >> i & 1 == 1).collect::<Vec<_>>())
        .collect();
    subalgebras.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let proper_only = !subalgebras.iter().any(|s| s.len() == n);

    Ok(BooleanSubalgebras {
        subalgebras,
        proper_only,
    })
}

/// Brute-force isomorphism search (order- and ortho-preserving bijection).
/// Returns the element mapping `L1 → L2` if one exists.
pub fn lattice_isomorphic(a: &FiniteLattice, b: &FiniteLattice) -> Result<Option<Vec<usize>>> {
    let n = a.n();
    if n > ISO_SEARCH_MAX || b.n() > ISO_SEARCH_MAX {
        return Err(Error::SearchBudgetExceeded {
            n: n.max(b.n()),
            max: ISO_SEARCH_MAX,
        });
    }
    if n != b.n() || a.has_ortho() != b.has_ortho() {
        return Ok(None);
    }

    let signature = |lat: &FiniteLattice, i: usize| -> (usize, usize, bool) {
        let down = (0..lat.n()).filter(|&k| lat.leq(k, i)).count();
        let up = (0..lat.n()).filter(|&k| lat.leq(i, k)).count();
        let self_perp = lat.has_ortho() && lat.perp(i).unwrap() == i;
        (down, up, self_perp)
    };
    let sig_a: Vec<_> = (0..n).map(|i| signature(a, i)).collect();
    let sig_b: Vec<_> = (0..n).map(|i| signature(b, i)).collect();
    {
        let mut sa = sig_a.clone();
        let mut sb = sig_b.clone();
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return Ok(None);
        }
    }

    fn search(
        a: &FiniteLattice,
        b: &FiniteLattice,
        sig_a: &[(usize, usize, bool)],
        sig_b: &[(usize, usize, bool)],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let i = map.len();
        if i == a.n() {
            return true;
        }
        for j in 0..b.n() {
            if used[j] || sig_a[i] != sig_b[j] {
                continue;
            }
            let consistent = (0..i).all(|k| {
                a.leq(i, k) == b.leq(j, map[k]) && a.leq(k, i) == b.leq(map[k], j)
            }) && (!a.has_ortho() || {
                let pi = a.perp(i).unwrap();
                pi > i || b.perp(j).unwrap() == map[pi]
            });
            if consistent {
                map.push(j);
                used[j] = true;
                if search(a, b, sig_a, sig_b, map, used) {
                    return true;
                }
                used[j] = false;
                map.pop();
            }
        }
        false
    }

    let mut map = Vec::with_capacity(n);
    let mut used = vec![false; n];
    if search(a, b, &sig_a, &sig_b, &mut map, &mut used) {
        Ok(Some(map))
    } else {
        Ok(None)
    }
}
