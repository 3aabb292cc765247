//! Finitely presented algebras `R[x_1, ..., x_k] / (f_1, ..., f_r)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::number::BaseRing;
use crate::poly::{JetVar, MultiPoly, PolyRing};

#[derive(Clone, Debug)]
pub struct AlgebraPresentation {
    pub base: BaseRing,
    pub generators: Vec<JetVar>,
    pub relations: Vec<MultiPoly>,
}

impl AlgebraPresentation {
    pub fn new(base: BaseRing, generators: Vec<JetVar>, relations: Vec<MultiPoly>) -> Result<Self> {
        let pres = AlgebraPresentation {
            base,
            generators,
            relations,
        };
        pres.check()?;
        Ok(pres)
    }

    pub fn free(base: BaseRing, generators: Vec<JetVar>) -> Self {
        AlgebraPresentation {
            base,
            generators,
            relations: Vec::new(),
        }
    }

    /// Relations may only mention declared generators, and generators must
    /// be distinct.
    pub fn check(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for g in &self.generators {
            if !seen.insert(g) {
                return Err(Error::Invalid(format!("duplicate generator {g}")));
            }
        }
        for r in &self.relations {
            for v in r.variables() {
                if !seen.contains(&v) {
                    return Err(Error::Invalid(format!(
                        "relation {r} uses undeclared variable {v}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn poly_ring(&self) -> PolyRing {
        PolyRing::new(self.base.clone())
    }

    /// Same generators and relations with coefficients re-read in `O`.
    pub fn lifted_relations(&self) -> (PolyRing, Vec<MultiPoly>) {
        let over_o = PolyRing::new(BaseRing::integral(self.base.triple().clone()));
        let src = self.poly_ring();
        let rels = self
            .relations
            .iter()
            .map(|r| src.change_base(r, &over_o))
            .collect();
        (over_o, rels)
    }

    /// Base change to another coefficient ring (e.g. reduction mod pi).
    pub fn change_base(&self, base: BaseRing) -> AlgebraPresentation {
        let src = self.poly_ring();
        let dst = PolyRing::new(base.clone());
        AlgebraPresentation {
            base,
            generators: self.generators.clone(),
            relations: self
                .relations
                .iter()
                .map(|r| src.change_base(r, &dst))
                .filter(|r| !r.is_zero())
                .collect(),
        }
    }

    /// Renames generators through a bijection, keeping the relations'
    /// shape.
    pub fn rename(&self, f: impl Fn(&JetVar) -> JetVar) -> AlgebraPresentation {
        let ring = self.poly_ring();
        let map: std::collections::HashMap<JetVar, MultiPoly> = self
            .generators
            .iter()
            .map(|g| (g.clone(), ring.var(f(g))))
            .collect();
        AlgebraPresentation {
            base: self.base.clone(),
            generators: self.generators.iter().map(&f).collect(),
            relations: self
                .relations
                .iter()
                .map(|r| ring.substitute(r, &map))
                .collect(),
        }
    }
}

impl fmt::Display for AlgebraPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        let rels: Vec<String> = self.relations.iter().map(|r| r.to_string()).collect();
        write!(f, "[{}]/({})", gens.join(", "), rels.join(", "))
    }
}
