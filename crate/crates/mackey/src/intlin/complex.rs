use num_bigint::BigInt;

use super::group::{homology_at, FgAbGroup, GroupHom, Subquotient};
use super::matrix::IntMatrix;

/// Homologically graded complex `... -> C[d] -> C[d-1] -> ...` over a contiguous range.
#[derive(Clone, Debug)]
pub struct AbComplex {
    /// Degree of `terms[0]`.
    pub lo: i64,
    pub terms: Vec<FgAbGroup>,
    /// `diffs[i]: terms[i + 1] -> terms[i]`.
    pub diffs: Vec<GroupHom>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("d∘d is nonzero at degree {0}")]
    NotAComplex(i64),
    #[error("differential at degree {0} does not match the terms")]
    Shape(i64),
    #[error("chain map fails to commute with the differential at degree {0}")]
    NotAChainMap(i64),
}

/// Levelwise map between two complexes on the same degree range.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub components: Vec<GroupHom>,
}

/// Homology at one degree with its cycle representatives.
#[derive(Clone, Debug)]
pub struct HomologyGroup {
    pub degree: i64,
    pub sub: Subquotient,
}

impl HomologyGroup {
    pub fn group(&self) -> &FgAbGroup {
        &self.sub.group
    }

    /// Cycle representatives (columns) of the homology generators.
    pub fn cycles(&self) -> &IntMatrix {
        &self.sub.lift
    }
}

impl AbComplex {
    pub fn new(lo: i64, terms: Vec<FgAbGroup>, diffs: Vec<GroupHom>) -> Result<Self, ComplexError> {
        let c = AbComplex { lo, terms, diffs };
        c.check()?;
        Ok(c)
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    fn check(&self) -> Result<(), ComplexError> {
        if self.diffs.len() + 1 != self.terms.len() && !(self.terms.is_empty() && self.diffs.is_empty()) {
            return Err(ComplexError::Shape(self.lo));
        }
        for (i, d) in self.diffs.iter().enumerate() {
            if d.source != self.terms[i + 1] || d.target != self.terms[i] {
                return Err(ComplexError::Shape(self.lo + i as i64 + 1));
            }
        }
        for i in 1..self.diffs.len() {
            if !self.diffs[i - 1].compose(&self.diffs[i]).is_zero() {
                return Err(ComplexError::NotAComplex(self.lo + i as i64 + 1));
            }
        }
        Ok(())
    }

    fn incoming(&self, i: usize) -> GroupHom {
        if i + 1 < self.terms.len() {
            self.diffs[i].clone()
        } else {
            GroupHom::zero(&FgAbGroup::zero(), &self.terms[i])
        }
    }

    fn outgoing(&self, i: usize) -> GroupHom {
        if i > 0 {
            self.diffs[i - 1].clone()
        } else {
            GroupHom::zero(&self.terms[0], &FgAbGroup::zero())
        }
    }

    /// Homology at every degree of the range.
    pub fn homology(&self) -> Vec<HomologyGroup> {
        (0..self.terms.len())
            .map(|i| HomologyGroup { degree: self.lo + i as i64, sub: homology_at(&self.incoming(i), &self.outgoing(i)) })
            .collect()
    }
}

/// Map induced on homology by a map of ambient groups that carries cycles to cycles
/// and boundaries to boundaries.
pub fn induced_map(source: &HomologyGroup, target: &HomologyGroup, ambient: &GroupHom) -> GroupHom {
    let images = ambient.matrix.mul(source.cycles());
    let m = target.sub.project_matrix(&images).expect("ambient map does not carry cycles to cycles");
    GroupHom::new_unchecked(source.group().clone(), target.group().clone(), m)
}

/// Homology of a complex, plus the induced maps of any supplied chain maps
/// (each from `c` to a complex with the same range given in `targets`).
pub fn homology_ab(
    c: &AbComplex,
    maps: &[(ChainMap, &AbComplex)],
) -> Result<(Vec<HomologyGroup>, Vec<Vec<GroupHom>>), ComplexError> {
    c.check()?;
    let h = c.homology();
    let mut induced = vec![];
    for (f, tgt) in maps {
        tgt.check()?;
        if f.components.len() != c.terms.len() || tgt.terms.len() != c.terms.len() || tgt.lo != c.lo {
            return Err(ComplexError::Shape(c.lo));
        }
        for i in 0..c.diffs.len() {
            let lhs = f.components[i].compose(&c.diffs[i]);
            let rhs = tgt.diffs[i].compose(&f.components[i + 1]);
            if !lhs.equals(&rhs) {
                return Err(ComplexError::NotAChainMap(c.lo + i as i64 + 1));
            }
        }
        let ht = tgt.homology();
        induced.push((0..h.len()).map(|i| induced_map(&h[i], &ht[i], &f.components[i])).collect());
    }
    Ok((h, induced))
}

/// Column vector helper.
pub fn unit_vector(n: usize, i: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::from(0); n];
    v[i] = BigInt::from(1);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> FgAbGroup {
        FgAbGroup::free(1)
    }

    #[test]
    fn multiplication_by_two() {
        let d = GroupHom::new(z(), z(), IntMatrix::from_i64(1, 1, &[2])).unwrap();
        let c = AbComplex::new(0, vec![z(), z()], vec![d]).unwrap();
        let (h, _) = homology_ab(&c, &[]).unwrap();
        assert_eq!(h[0].group().to_string(), "Z/2");
        assert!(h[1].group().is_zero());
    }

    #[test]
    fn rejects_non_complex() {
        let one = GroupHom::new(z(), z(), IntMatrix::from_i64(1, 1, &[1])).unwrap();
        assert_eq!(
            AbComplex::new(0, vec![z(), z(), z()], vec![one.clone(), one]).unwrap_err(),
            ComplexError::NotAComplex(2)
        );
    }

    #[test]
    fn induced_map_of_multiplication() {
        // Z -2-> Z in degrees 1,0; the chain map is 3 in both degrees.
        let d = GroupHom::new(z(), z(), IntMatrix::from_i64(1, 1, &[2])).unwrap();
        let c = AbComplex::new(0, vec![z(), z()], vec![d]).unwrap();
        let three = GroupHom::new(z(), z(), IntMatrix::from_i64(1, 1, &[3])).unwrap();
        let f = ChainMap { components: vec![three.clone(), three] };
        let (_, ind) = homology_ab(&c, &[(f, &c)]).unwrap();
        // 3 acts as 1 on Z/2
        assert!(ind[0][0].equals(&GroupHom::identity(&ind[0][0].source)));
    }

    #[test]
    fn dual_lambda_chain_at_underlying_level() {
        // Z[C_3] <-(1-g)- Z[C_3] <-diag- Z in degrees -2, -1, 0
        let g3 = FgAbGroup::free(3);
        let one_minus_g = IntMatrix::from_i64(3, 3, &[1, 0, -1, -1, 1, 0, 0, -1, 1]);
        let diag = IntMatrix::from_i64(3, 1, &[1, 1, 1]);
        let c = AbComplex::new(
            -2,
            vec![g3.clone(), g3.clone(), z()],
            vec![GroupHom::new(g3.clone(), g3.clone(), one_minus_g).unwrap(), GroupHom::new(z(), g3, diag).unwrap()],
        )
        .unwrap();
        let h = c.homology();
        assert_eq!(h[0].group().to_string(), "Z");
        assert!(h[1].group().is_zero() && h[2].group().is_zero());
    }
}
