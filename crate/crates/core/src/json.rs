//! Exchange formats shared by the CLI subcommands.
//!
//! Complexes and chains serialize directly (`{"vertices", "facets"}` and
//! `{"degree", "terms"}`). Buildings add `types`, the apartments as facet
//! lists, and the Coxeter diagram. Quadruples are plain arrays
//! `[pq, pr, qr, qm, mr, pm]`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::building::{BuildingError, SphericalBuilding};
use crate::catk::Quadruple;
use crate::coxeter::CoxeterDiagram;
use crate::simplicial::{Simplex, SimplicialComplex, SimplicialError};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
    #[error(transparent)]
    Building(#[from] BuildingError),
    #[error("expected {0}")]
    Shape(&'static str),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BuildingJson {
    pub vertices: usize,
    pub facets: Vec<Vec<usize>>,
    pub types: Vec<usize>,
    pub apartments: Vec<Vec<Vec<usize>>>,
    pub diagram: CoxeterDiagram,
}

fn facet_lists(k: &SimplicialComplex) -> Vec<Vec<usize>> {
    k.facets().iter().map(|s| s.vertices().to_vec()).collect()
}

impl From<&SphericalBuilding> for BuildingJson {
    fn from(b: &SphericalBuilding) -> Self {
        Self {
            vertices: b.complex().vertex_count(),
            facets: facet_lists(b.complex()),
            types: b.type_of().to_vec(),
            apartments: b.apartments().iter().map(|a| facet_lists(a.complex())).collect(),
            diagram: b.diagram().clone(),
        }
    }
}

fn complex_from(vertices: usize, facets: &[Vec<usize>]) -> Result<SimplicialComplex, JsonError> {
    let simplices = facets
        .iter()
        .map(|f| Simplex::new(f.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SimplicialComplex::with_vertex_count(vertices, simplices)?)
}

impl BuildingJson {
    pub fn to_building(&self) -> Result<SphericalBuilding, JsonError> {
        let complex = self.complex()?;
        let apartments = self
            .apartments
            .iter()
            .map(|a| complex_from(self.vertices, a))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SphericalBuilding::from_parts(
            complex,
            self.diagram.clone(),
            self.types.clone(),
            apartments,
        )?)
    }

    pub fn complex(&self) -> Result<SimplicialComplex, JsonError> {
        complex_from(self.vertices, &self.facets)
    }
}

/// Reads a complex from either the complex or the building format.
pub fn parse_complex(text: &str) -> Result<SimplicialComplex, JsonError> {
    Ok(serde_json::from_str(text)?)
}

pub fn parse_building(text: &str) -> Result<SphericalBuilding, JsonError> {
    serde_json::from_str::<BuildingJson>(text)?.to_building()
}

pub fn quadruple_to_array(q: &Quadruple) -> [f64; 6] {
    [q.pq, q.pr, q.qr, q.qm, q.mr, q.pm]
}

pub fn quadruple_from_array(a: [f64; 6]) -> Quadruple {
    let [pq, pr, qr, qm, mr, pm] = a;
    Quadruple { pq, pr, qr, qm, mr, pm }
}

/// One quadruple `[..6 reals]` or a list of them.
pub fn parse_quadruples(text: &str) -> Result<Vec<Quadruple>, JsonError> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Input {
        One([f64; 6]),
        Many(Vec<[f64; 6]>),
    }
    match serde_json::from_str::<Input>(text) {
        Ok(Input::One(a)) => Ok(vec![quadruple_from_array(a)]),
        Ok(Input::Many(v)) => Ok(v.into_iter().map(quadruple_from_array).collect()),
        Err(_) => Err(JsonError::Shape("an array of six reals or a list of such arrays")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::building::an_building;

    #[test]
    fn building_round_trip() {
        let b = an_building(2, 2).unwrap();
        let text = serde_json::to_string(&BuildingJson::from(&b)).unwrap();
        let back = parse_building(&text).unwrap();
        assert_eq!(back.complex().facets(), b.complex().facets());
        assert_eq!(back.apartments().len(), 28);
        assert_eq!(back.type_of(), b.type_of());
        let k = parse_complex(&text).unwrap();
        assert_eq!(k.facets().len(), 21);
    }

    #[test]
    fn quadruples() {
        let one = parse_quadruples("[1,1,2,1,1,0.5]").unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(quadruple_to_array(&one[0]), [1.0, 1.0, 2.0, 1.0, 1.0, 0.5]);
        assert_eq!(parse_quadruples("[[1,1,2,1,1,0.5],[1,1,2,1,1,0.5]]").unwrap().len(), 2);
        assert!(parse_quadruples("[1,2]").is_err());
    }
}
