//! Finitely generated discrete abelian groups `Z^r ⊕ Z_{m_1} ⊕ … ⊕ Z_{m_s}`,
//! their characters and the points of the compact dual.
//!
//! A character is an element of the discrete group. A dual point pairs a torus
//! angle with each free factor and a residue with each torsion factor, so that
//! `arg γ(x) = Σ γ_j θ_j + 2π Σ t_i c_i / m_i (mod 2π)`.

use std::f64::consts::TAU;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::angle::{reduce_angle, Phase, Turns};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    free_rank: usize,
    torsion_orders: Vec<u64>,
}

impl GroupSpec {
    pub fn new(free_rank: usize, torsion_orders: Vec<u64>) -> Result<Self> {
        if free_rank + torsion_orders.len() == 0 {
            return Err(Error::InvalidGroup("group has no factors".into()));
        }
        if let Some(m) = torsion_orders.iter().find(|&&m| m < 2) {
            return Err(Error::InvalidGroup(format!("torsion order {m} < 2")));
        }
        Ok(GroupSpec { free_rank, torsion_orders })
    }

    /// `Z^r`.
    pub fn free(r: usize) -> Result<Self> {
        Self::new(r, vec![])
    }

    /// `Z_m^s`.
    pub fn torsion(m: u64, s: usize) -> Result<Self> {
        Self::new(0, vec![m; s])
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion_orders(&self) -> &[u64] {
        &self.torsion_orders
    }

    /// Least common multiple of the torsion orders (1 when there are none).
    pub fn torsion_lcm(&self) -> u64 {
        self.torsion_orders.iter().fold(1, |l, &m| l.lcm(&m))
    }

    /// Number of points of the torsion part of the dual, `∏ m_i`.
    pub fn torsion_dual_size(&self) -> u128 {
        self.torsion_orders
            .iter()
            .fold(1u128, |p, &m| p.saturating_mul(m as u128))
    }

    pub fn is_torsion(&self) -> bool {
        self.free_rank == 0
    }

    /// Builds a character, reducing torsion coordinates modulo their orders.
    pub fn character(&self, free: Vec<i64>, torsion: Vec<i64>) -> Result<Character> {
        if free.len() != self.free_rank || torsion.len() != self.torsion_orders.len() {
            return Err(Error::DimensionMismatch(format!(
                "character has {}+{} coordinates, group has {}+{}",
                free.len(),
                torsion.len(),
                self.free_rank,
                self.torsion_orders.len()
            )));
        }
        let torsion = torsion
            .iter()
            .zip(&self.torsion_orders)
            .map(|(&t, &m)| t.rem_euclid(m as i64) as u64)
            .collect();
        Ok(Character { free, torsion })
    }

    /// Character of `Z` (or of the single free factor of `Z ⊕ torsion` with zero torsion part).
    pub fn integer(&self, k: i64) -> Result<Character> {
        if self.free_rank != 1 {
            return Err(Error::DimensionMismatch("integer character needs free rank 1".into()));
        }
        self.character(vec![k], vec![0; self.torsion_orders.len()])
    }

    pub fn identity(&self) -> Character {
        Character {
            free: vec![0; self.free_rank],
            torsion: vec![0; self.torsion_orders.len()],
        }
    }

    pub fn dual_point(&self, angles: Vec<f64>, selections: Vec<i64>) -> Result<DualPoint> {
        if angles.len() != self.free_rank || selections.len() != self.torsion_orders.len() {
            return Err(Error::DimensionMismatch(format!(
                "dual point has {}+{} coordinates, group has {}+{}",
                angles.len(),
                selections.len(),
                self.free_rank,
                self.torsion_orders.len()
            )));
        }
        Ok(DualPoint {
            angles: angles.into_iter().map(reduce_angle).collect(),
            selections: selections
                .iter()
                .zip(&self.torsion_orders)
                .map(|(&c, &m)| c.rem_euclid(m as i64) as u64)
                .collect(),
        })
    }

    pub fn dual_identity(&self) -> DualPoint {
        DualPoint {
            angles: vec![0.0; self.free_rank],
            selections: vec![0; self.torsion_orders.len()],
        }
    }

    pub fn check_character(&self, gamma: &Character) -> Result<()> {
        let ok = gamma.free.len() == self.free_rank
            && gamma.torsion.len() == self.torsion_orders.len()
            && gamma.torsion.iter().zip(&self.torsion_orders).all(|(&t, &m)| t < m);
        if ok {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!("character {gamma} does not belong to {self}")))
        }
    }

    pub fn check_point(&self, x: &DualPoint) -> Result<()> {
        let ok = x.angles.len() == self.free_rank
            && x.selections.len() == self.torsion_orders.len()
            && x.selections.iter().zip(&self.torsion_orders).all(|(&c, &m)| c < m);
        if ok {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!("dual point does not belong to {self}")))
        }
    }

    pub fn add(&self, a: &Character, b: &Character) -> Result<Character> {
        self.check_character(a)?;
        self.check_character(b)?;
        Ok(Character {
            free: a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect(),
            torsion: a
                .torsion
                .iter()
                .zip(&b.torsion)
                .zip(&self.torsion_orders)
                .map(|((x, y), m)| (x + y) % m)
                .collect(),
        })
    }

    pub fn negate(&self, a: &Character) -> Result<Character> {
        self.check_character(a)?;
        Ok(Character {
            free: a.free.iter().map(|x| -x).collect(),
            torsion: a
                .torsion
                .iter()
                .zip(&self.torsion_orders)
                .map(|(x, m)| (m - x) % m)
                .collect(),
        })
    }

    /// `Σ coeffs[k] · chars[k]`.
    pub fn linear_combination(&self, chars: &[Character], coeffs: &[i64]) -> Result<Character> {
        if chars.len() != coeffs.len() {
            return Err(Error::DimensionMismatch("coefficient count".into()));
        }
        let mut free = vec![0i64; self.free_rank];
        let mut torsion = vec![0i64; self.torsion_orders.len()];
        for (g, &c) in chars.iter().zip(coeffs) {
            self.check_character(g)?;
            for (f, &x) in free.iter_mut().zip(&g.free) {
                *f += c * x;
            }
            for ((t, &x), &m) in torsion.iter_mut().zip(&g.torsion).zip(&self.torsion_orders) {
                *t = (*t + c * x as i64).rem_euclid(m as i64);
            }
        }
        self.character(free, torsion)
    }

    /// `arg γ(x)` as an exact torsion part plus free radians.
    pub fn phase(&self, gamma: &Character, x: &DualPoint) -> Result<Phase> {
        self.check_character(gamma)?;
        self.check_point(x)?;
        Ok(self.phase_unchecked(gamma, x))
    }

    pub(crate) fn phase_unchecked(&self, gamma: &Character, x: &DualPoint) -> Phase {
        let free = gamma
            .free
            .iter()
            .zip(&x.angles)
            .map(|(&k, &t)| k as f64 * t)
            .sum();
        Phase {
            exact: self.torsion_phase(gamma, &x.selections),
            free,
        }
    }

    /// Exact torsion contribution `Σ t_i c_i / m_i`, expressed over `lcm(m_i)`.
    pub(crate) fn torsion_phase(&self, gamma: &Character, selections: &[u64]) -> Turns {
        let l = self.torsion_lcm();
        let steps = gamma
            .torsion
            .iter()
            .zip(selections)
            .zip(&self.torsion_orders)
            .fold(0u128, |acc, ((&t, &c), &m)| {
                (acc + (t as u128 * c as u128 % m as u128) * (l / m) as u128) % l as u128
            });
        Turns::new(steps as i128, l as i128)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion_orders.len() {
            let m = self.torsion_orders[i];
            let run = self.torsion_orders[i..].iter().take_while(|&&x| x == m).count();
            parts.push(if run == 1 { format!("Z{m}") } else { format!("Z{m}^{run}") });
            i += run;
        }
        write!(f, "{}", parts.join(" x "))
    }
}

/// An element of the discrete group. The derived order is lexicographic by
/// free coordinates, then torsion residues.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Character {
    pub(crate) free: Vec<i64>,
    pub(crate) torsion: Vec<u64>,
}

impl Character {
    pub fn free_coords(&self) -> &[i64] {
        &self.free
    }

    pub fn torsion_coords(&self) -> &[u64] {
        &self.torsion
    }

    pub fn is_identity(&self) -> bool {
        self.free.iter().all(|&x| x == 0) && self.torsion.iter().all(|&t| t == 0)
    }

    pub fn has_free_part(&self) -> bool {
        self.free.iter().any(|&x| x != 0)
    }

    pub fn coords(&self) -> Vec<i64> {
        self.free
            .iter()
            .copied()
            .chain(self.torsion.iter().map(|&t| t as i64))
            .collect()
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords().iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", c.join(","))
    }
}

/// A point of the compact dual group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualPoint {
    pub(crate) angles: Vec<f64>,
    pub(crate) selections: Vec<u64>,
}

impl DualPoint {
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn selections(&self) -> &[u64] {
        &self.selections
    }

    /// Componentwise sum (group operation of the dual).
    pub fn shifted(&self, group: &GroupSpec, by: &DualPoint) -> Result<DualPoint> {
        group.check_point(self)?;
        group.check_point(by)?;
        Ok(DualPoint {
            angles: self
                .angles
                .iter()
                .zip(&by.angles)
                .map(|(a, b)| reduce_angle(a + b))
                .collect(),
            selections: self
                .selections
                .iter()
                .zip(&by.selections)
                .zip(group.torsion_orders())
                .map(|((a, b), m)| (a + b) % m)
                .collect(),
        })
    }

    pub fn negated(&self, group: &GroupSpec) -> DualPoint {
        DualPoint {
            angles: self.angles.iter().map(|a| reduce_angle(TAU - a)).collect(),
            selections: self
                .selections
                .iter()
                .zip(group.torsion_orders())
                .map(|(c, m)| (m - c) % m)
                .collect(),
        }
    }
}

/// `arg γ(x)` in `[0, 2π)`.
pub fn evaluate_arg(group: &GroupSpec, gamma: &Character, x: &DualPoint) -> Result<f64> {
    Ok(group.phase(gamma, x)?.radians())
}

/// A finite set of distinct characters of one group, kept in canonical
/// (lexicographic) order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterSet {
    group: GroupSpec,
    elements: Vec<Character>,
}

impl CharacterSet {
    pub fn new(group: GroupSpec, mut elements: Vec<Character>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::EmptySet);
        }
        for e in &elements {
            group.check_character(e)?;
        }
        elements.sort();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateCharacter(w[0].to_string()));
        }
        Ok(CharacterSet { group, elements })
    }

    /// Subset of `Z` given by integers.
    pub fn integers(ks: &[i64]) -> Result<Self> {
        let g = GroupSpec::free(1)?;
        let els = ks.iter().map(|&k| g.integer(k)).collect::<Result<Vec<_>>>()?;
        Self::new(g, els)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn elements(&self) -> &[Character] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, gamma: &Character) -> Option<usize> {
        self.elements.binary_search(gamma).ok()
    }

    pub fn contains_identity(&self) -> bool {
        self.elements.iter().any(Character::is_identity)
    }

    /// `{-γ : γ ∈ E}`.
    pub fn negated(&self) -> Result<Self> {
        let els = self
            .elements
            .iter()
            .map(|g| self.group.negate(g))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.group.clone(), els)
    }

    /// The subset picked by `indices` (positions in canonical order).
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let els = indices
            .iter()
            .map(|&i| {
                self.elements
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::InvalidInput(format!("index {i} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.group.clone(), els)
    }

    /// Largest absolute free coordinate, per free factor.
    pub fn free_lipschitz(&self) -> Vec<u64> {
        (0..self.group.free_rank())
            .map(|j| self.elements.iter().map(|g| g.free[j].unsigned_abs()).max().unwrap_or(0))
            .collect()
    }
}

impl fmt::Display for CharacterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let els: Vec<String> = self.elements.iter().map(|e| e.to_string()).collect();
        write!(f, "{} : {}", self.group, els.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn group_validation() {
        assert!(GroupSpec::new(0, vec![]).is_err());
        assert!(GroupSpec::new(1, vec![1]).is_err());
        assert!(GroupSpec::new(0, vec![2, 3]).is_ok());
        assert_eq!(GroupSpec::new(0, vec![4, 6]).unwrap().torsion_lcm(), 12);
        assert_eq!(GroupSpec::new(1, vec![2, 2, 3]).unwrap().to_string(), "Z x Z2^2 x Z3");
    }

    #[test]
    fn evaluate_examples() {
        let z = GroupSpec::free(1).unwrap();
        let x = z.dual_point(vec![PI / 2.0], vec![]).unwrap();
        let v = evaluate_arg(&z, &z.integer(3).unwrap(), &x).unwrap();
        assert!((v - 3.0 * PI / 2.0).abs() < 1e-15);

        let z2 = GroupSpec::torsion(2, 1).unwrap();
        let g = z2.character(vec![], vec![1]).unwrap();
        let x = z2.dual_point(vec![], vec![1]).unwrap();
        assert_eq!(evaluate_arg(&z2, &g, &x).unwrap(), PI);

        let zz2 = GroupSpec::new(1, vec![2]).unwrap();
        let g = zz2.character(vec![2], vec![1]).unwrap();
        let x = zz2.dual_point(vec![PI / 3.0], vec![1]).unwrap();
        assert!((evaluate_arg(&zz2, &g, &x).unwrap() - 5.0 * PI / 3.0).abs() < 1e-14);
    }

    #[test]
    fn evaluate_rejects_mismatch() {
        let z = GroupSpec::free(1).unwrap();
        let z2 = GroupSpec::torsion(2, 1).unwrap();
        let g = z.integer(1).unwrap();
        assert!(evaluate_arg(&z2, &g, &z2.dual_identity()).is_err());
        assert!(z.dual_point(vec![0.0, 1.0], vec![]).is_err());
        assert!(z.character(vec![1], vec![1]).is_err());
    }

    #[test]
    fn combine_examples() {
        let z = GroupSpec::free(1).unwrap();
        let s = z.add(&z.integer(2).unwrap(), &z.integer(3).unwrap()).unwrap();
        assert_eq!(s, z.integer(5).unwrap());

        let c = GroupSpec::torsion(2, 3).unwrap();
        let a = c.character(vec![], vec![1, 1, 0]).unwrap();
        let b = c.character(vec![], vec![1, 0, 1]).unwrap();
        assert_eq!(c.add(&a, &b).unwrap(), c.character(vec![], vec![0, 1, 1]).unwrap());

        let z2 = GroupSpec::torsion(2, 1).unwrap();
        let one = z2.character(vec![], vec![1]).unwrap();
        assert_eq!(z2.negate(&one).unwrap(), one);
        assert!(z2.identity().is_identity());
        assert!(!one.is_identity());
        assert!(z2.add(&one, &z.integer(1).unwrap()).is_err());
    }

    #[test]
    fn torsion_phase_is_exact() {
        let g = GroupSpec::new(0, vec![4, 6]).unwrap();
        let gamma = g.character(vec![], vec![3, 5]).unwrap();
        let x = g.dual_point(vec![], vec![1, 1]).unwrap();
        // 3/4 + 5/6 = 19/12 = 7/12
        assert_eq!(g.phase(&gamma, &x).unwrap().exact, Turns::new(7, 12));
    }

    #[test]
    fn character_set_canonical() {
        let c = GroupSpec::torsion(2, 3).unwrap();
        let mk = |v: [i64; 3]| c.character(vec![], v.to_vec()).unwrap();
        let set = CharacterSet::new(
            c.clone(),
            vec![mk([0, 1, 0]), mk([0, 0, 1]), mk([1, 1, 0]), mk([1, 0, 1])],
        )
        .unwrap();
        assert_eq!(set.elements()[0], mk([0, 0, 1]));
        assert_eq!(set.index_of(&mk([1, 1, 0])), Some(3));
        assert!(matches!(
            CharacterSet::new(c.clone(), vec![mk([1, 0, 0]), mk([1, 0, 0])]),
            Err(Error::DuplicateCharacter(_))
        ));
        assert!(matches!(CharacterSet::new(c, vec![]), Err(Error::EmptySet)));
    }
}
