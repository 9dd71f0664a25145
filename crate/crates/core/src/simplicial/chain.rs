use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::{Simplex, SimplicialError};

/// An integral chain of fixed degree; zero coefficients are never stored.
///
/// JSON form: `{"degree": k, "terms": [{"simplex": [..], "coef": c}, ..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "ChainRepr", try_from = "ChainRepr")]
pub struct Chain {
    degree: usize,
    terms: BTreeMap<Simplex, i64>,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    simplex: Vec<usize>,
    coef: i64,
}

#[derive(Serialize, Deserialize)]
struct ChainRepr {
    degree: usize,
    terms: Vec<TermRepr>,
}

impl From<Chain> for ChainRepr {
    fn from(c: Chain) -> Self {
        ChainRepr {
            degree: c.degree,
            terms: c
                .terms
                .into_iter()
                .map(|(s, coef)| TermRepr {
                    simplex: s.vertices().to_vec(),
                    coef,
                })
                .collect(),
        }
    }
}

impl TryFrom<ChainRepr> for Chain {
    type Error = SimplicialError;

    fn try_from(r: ChainRepr) -> Result<Self, SimplicialError> {
        let mut chain = Chain::zero(r.degree);
        for t in r.terms {
            chain.add_term(Simplex::new(t.simplex)?, t.coef)?;
        }
        Ok(chain)
    }
}

impl Chain {
    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(degree: usize, terms: I) -> Result<Self, SimplicialError>
    where
        I: IntoIterator<Item = (Simplex, i64)>,
    {
        let mut chain = Self::zero(degree);
        for (s, c) in terms {
            chain.add_term(s, c)?;
        }
        Ok(chain)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Simplex, i64> {
        &self.terms
    }

    pub fn coefficient(&self, s: &Simplex) -> i64 {
        self.terms.get(s).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, s: Simplex, coef: i64) -> Result<(), SimplicialError> {
        if s.dimension() != self.degree {
            return Err(SimplicialError::DegreeMismatch {
                found: s.dimension(),
                expected: self.degree,
                simplex: s,
            });
        }
        self.add_unchecked(s, coef);
        Ok(())
    }

    /// Adds `coef` times the oriented simplex with the given vertex order.
    pub fn add_oriented(&mut self, vertices: &[usize], coef: i64) -> Result<(), SimplicialError> {
        if let Some((s, sign)) = Simplex::oriented(vertices)? {
            self.add_term(s, sign * coef)?;
        }
        Ok(())
    }

    fn add_unchecked(&mut self, s: Simplex, coef: i64) {
        if coef == 0 {
            return;
        }
        match self.terms.entry(s) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += coef;
                if *e.get() == 0 {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(coef);
            }
        }
    }

    /// Simplicial boundary; the boundary of a 0-chain is the zero 0-chain.
    pub fn boundary(&self) -> Chain {
        if self.degree == 0 {
            return Chain::zero(0);
        }
        let mut acc: BTreeMap<Simplex, i64> = BTreeMap::new();
        for (s, &c) in &self.terms {
            for (face, sign) in s.boundary_faces() {
                *acc.entry(face).or_insert(0) += sign * c;
            }
        }
        acc.retain(|_, c| *c != 0);
        Chain {
            degree: self.degree - 1,
            terms: acc,
        }
    }

    pub fn is_cycle(&self) -> bool {
        self.boundary().is_zero()
    }

    /// The simplices carrying a nonzero coefficient.
    pub fn keys(&self) -> impl Iterator<Item = &Simplex> {
        self.terms.keys()
    }
}

impl Add for &Chain {
    type Output = Chain;

    fn add(self, rhs: &Chain) -> Chain {
        assert_eq!(self.degree, rhs.degree, "adding chains of different degree");
        let mut out = self.clone();
        for (s, &c) in &rhs.terms {
            out.add_unchecked(s.clone(), c);
        }
        out
    }
}

impl Sub for &Chain {
    type Output = Chain;

    fn sub(self, rhs: &Chain) -> Chain {
        self + &(-rhs)
    }
}

impl Neg for &Chain {
    type Output = Chain;

    fn neg(self) -> Chain {
        self * -1
    }
}

impl Mul<i64> for &Chain {
    type Output = Chain;

    fn mul(self, k: i64) -> Chain {
        if k == 0 {
            return Chain::zero(self.degree);
        }
        Chain {
            degree: self.degree,
            terms: self.terms.iter().map(|(s, &c)| (s.clone(), c * k)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[usize]) -> Simplex {
        Simplex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn boundary_squares_to_zero_on_a_simplex() {
        let c = Chain::from_terms(2, [(s(&[0, 1, 2]), 1)]).unwrap();
        let b = c.boundary();
        assert_eq!(b.coefficient(&s(&[1, 2])), 1);
        assert_eq!(b.coefficient(&s(&[0, 2])), -1);
        assert_eq!(b.coefficient(&s(&[0, 1])), 1);
        assert!(b.boundary().is_zero());
    }

    #[test]
    fn cancellation_removes_terms() {
        let mut c = Chain::zero(1);
        c.add_oriented(&[1, 0], 1).unwrap();
        c.add_term(s(&[0, 1]), 1).unwrap();
        assert!(c.is_zero());
        assert!(c.add_term(s(&[0]), 1).is_err());
    }

    #[test]
    fn arithmetic() {
        let a = Chain::from_terms(1, [(s(&[0, 1]), 2), (s(&[1, 2]), 1)]).unwrap();
        let b = Chain::from_terms(1, [(s(&[0, 1]), 2)]).unwrap();
        let d = &a - &b;
        assert_eq!(d.terms().len(), 1);
        assert_eq!(d.coefficient(&s(&[1, 2])), 1);
        let zero = [0i64][0];
        assert_eq!((&a * zero).terms().len(), 0);
    }
}
