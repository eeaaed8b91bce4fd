//! Presented algebras k<X>/(R) and their TOML file format.
//!
//! ```toml
//! name = "jordan-p3"
//! expected_dimension = 9
//!
//! [field]
//! p = 3
//! m = 1              # optional, default 1
//! modulus = [1, 0, 1] # optional, low coefficient first
//!
//! [scalars]          # optional named constants
//! q = { root_of_unity = 4, power = 1 }
//! h = -1
//!
//! [generators]
//! names = ["x", "y"]
//! degrees = [1, 1]           # optional weights, default 1
//! multidegrees = [[1], [1]]  # optional grading used for homogeneity checks
//! precedence = ["x", "y"]    # optional, smallest letter first
//!
//! [relations]
//! list = ["y*x - x*y + 1/2*x^2", "x^3", "y^3"]
//! ```
//! In extension fields the scalar `t` (class of the indeterminate) is predefined.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::expr::{parse_poly, Scope};
use crate::field::{Fe, Field};
use crate::word::{Letter, MonomialOrder, NcPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub weight: u32,
    pub multidegree: Vec<i64>,
}

impl Generator {
    pub fn new(name: impl Into<String>) -> Self {
        Generator { name: name.into(), weight: 1, multidegree: Vec::new() }
    }
    pub fn weighted(name: impl Into<String>, weight: u32) -> Self {
        Generator { name: name.into(), weight, multidegree: Vec::new() }
    }
    pub fn with_multidegree(mut self, d: Vec<i64>) -> Self {
        self.multidegree = d;
        self
    }
}

#[derive(Clone, Debug)]
pub struct Presentation {
    pub name: String,
    pub field: Field,
    pub gens: Vec<Generator>,
    pub relations: Vec<NcPoly>,
    pub expected_dim: Option<usize>,
    /// Letters from smallest to largest; identity when empty.
    pub precedence: Vec<Letter>,
}

impl Presentation {
    pub fn new(name: impl Into<String>, field: &Field, gens: Vec<Generator>) -> Self {
        Presentation {
            name: name.into(),
            field: field.clone(),
            gens,
            relations: Vec::new(),
            expected_dim: None,
            precedence: Vec::new(),
        }
    }

    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    pub fn names(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.name.clone()).collect()
    }

    pub fn letter(&self, name: &str) -> Option<Letter> {
        self.gens.iter().position(|g| g.name == name).map(|i| i as Letter)
    }

    pub fn order(&self) -> MonomialOrder {
        let w = self.gens.iter().map(|g| g.weight).collect();
        if self.precedence.is_empty() {
            MonomialOrder::weighted(w)
        } else {
            MonomialOrder::with_precedence(w, &self.precedence)
        }
    }

    pub fn push(&mut self, r: NcPoly) {
        if !r.is_zero() {
            self.relations.push(r);
        }
    }

    /// Parse and add a relation written in generator names.
    pub fn push_str(&mut self, src: &str) -> Result<()> {
        let r = self.parse(src, &HashMap::new())?;
        self.push(r);
        Ok(())
    }

    pub fn parse(&self, src: &str, scalars: &HashMap<String, Fe>) -> Result<NcPoly> {
        let names = self.names();
        let mut sc = scalars.clone();
        if self.field.m() > 1 && !sc.contains_key("t") {
            sc.insert("t".into(), self.field.generator_t());
        }
        parse_poly(src, &Scope { field: &self.field, generators: &names, scalars: &sc })
    }

    pub fn render(&self, p: &NcPoly) -> String {
        p.render(&self.field, &self.names(), &self.order())
    }

    /// Every relation homogeneous for the weights.
    pub fn is_weight_graded(&self) -> bool {
        let o = self.order();
        o.all_weights_positive() && self.relations.iter().all(|r| r.is_homogeneous(&o))
    }

    pub fn has_multidegrees(&self) -> bool {
        self.gens.iter().any(|g| !g.multidegree.is_empty())
    }

    pub fn validate(&self) -> Result<()> {
        if self.gens.is_empty() {
            return Err(CoreError::Presentation("no generators".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for g in &self.gens {
            if !seen.insert(&g.name) {
                return Err(CoreError::Presentation(format!("duplicate generator {}", g.name)));
            }
        }
        if !self.precedence.is_empty() {
            let mut p = self.precedence.clone();
            p.sort_unstable();
            if p != (0..self.gens.len() as Letter).collect::<Vec<_>>() {
                return Err(CoreError::Presentation("precedence is not a permutation".into()));
            }
        }
        if self.has_multidegrees() {
            let s = self.gens[0].multidegree.len();
            if self.gens.iter().any(|g| g.multidegree.len() != s) {
                return Err(CoreError::Presentation("multidegrees of unequal length".into()));
            }
            let md: Vec<Vec<i64>> = self.gens.iter().map(|g| g.multidegree.clone()).collect();
            for r in &self.relations {
                if !r.is_multihomogeneous(&md) {
                    return Err(CoreError::Presentation(format!(
                        "relation {} is not homogeneous in the declared grading",
                        self.render(r)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        let names = self.names();
        let file = PresFile {
            name: Some(self.name.clone()),
            expected_dimension: self.expected_dim,
            field: FieldSection {
                p: self.field.p(),
                m: Some(self.field.m()),
                modulus: (self.field.m() > 1).then(|| self.field.spec().modulus.clone()),
            },
            scalars: BTreeMap::new(),
            generators: GenSection {
                names: names.clone(),
                degrees: Some(self.gens.iter().map(|g| g.weight).collect()),
                multidegrees: self.has_multidegrees().then(|| self.gens.iter().map(|g| g.multidegree.clone()).collect()),
                precedence: (!self.precedence.is_empty())
                    .then(|| self.precedence.iter().map(|&l| names[l as usize].clone()).collect()),
            },
            relations: RelSection { list: self.relations.iter().map(|r| self.render(r)).collect() },
        };
        toml::to_string(&file).expect("presentation serializes")
    }

    pub fn from_toml(text: &str) -> Result<Presentation> {
        let file: PresFile = toml::from_str(text).map_err(|e| CoreError::Parse(e.to_string()))?;
        file.into_presentation()
    }
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct FieldSection {
    pub p: u32,
    pub m: Option<u32>,
    pub modulus: Option<Vec<u32>>,
}

impl FieldSection {
    pub fn build(&self) -> Result<Field> {
        Field::make(self.p, self.m.unwrap_or(1), self.modulus.clone())
    }
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(untagged)]
pub enum ScalarDef {
    Int(i64),
    Root { root_of_unity: u32, power: Option<i64> },
    Frac { num: i64, den: i64 },
}

impl ScalarDef {
    pub fn eval(&self, f: &Field) -> Result<Fe> {
        match self {
            ScalarDef::Int(v) => Ok(f.from_i64(*v)),
            ScalarDef::Root { root_of_unity, power } => Ok(f.pow(f.root_of_unity(*root_of_unity)?, power.unwrap_or(1))),
            ScalarDef::Frac { num, den } => f.from_frac(*num, *den),
        }
    }
}

pub fn eval_scalars(f: &Field, defs: &BTreeMap<String, ScalarDef>) -> Result<HashMap<String, Fe>> {
    defs.iter().map(|(k, v)| Ok((k.clone(), v.eval(f)?))).collect()
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct GenSection {
    pub names: Vec<String>,
    pub degrees: Option<Vec<u32>>,
    pub multidegrees: Option<Vec<Vec<i64>>>,
    pub precedence: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct RelSection {
    pub list: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct PresFile {
    pub name: Option<String>,
    pub expected_dimension: Option<usize>,
    pub field: FieldSection,
    #[serde(default)]
    pub scalars: BTreeMap<String, ScalarDef>,
    pub generators: GenSection,
    pub relations: RelSection,
}

impl PresFile {
    pub fn into_presentation(self) -> Result<Presentation> {
        let field = self.field.build()?;
        let n = self.generators.names.len();
        let degrees = self.generators.degrees.clone().unwrap_or_else(|| vec![1; n]);
        if degrees.len() != n {
            return Err(CoreError::Presentation("degrees and names differ in length".into()));
        }
        let md = self.generators.multidegrees.clone().unwrap_or_else(|| vec![Vec::new(); n]);
        if md.len() != n {
            return Err(CoreError::Presentation("multidegrees and names differ in length".into()));
        }
        let gens = self
            .generators
            .names
            .iter()
            .zip(degrees)
            .zip(md)
            .map(|((nm, w), d)| Generator { name: nm.clone(), weight: w, multidegree: d })
            .collect();
        let mut pres = Presentation::new(self.name.clone().unwrap_or_else(|| "unnamed".into()), &field, gens);
        pres.expected_dim = self.expected_dimension;
        if let Some(prec) = &self.generators.precedence {
            pres.precedence = prec
                .iter()
                .map(|nm| pres.letter(nm).ok_or_else(|| CoreError::Presentation(format!("unknown generator {nm} in precedence"))))
                .collect::<Result<_>>()?;
        }
        let scalars = eval_scalars(&field, &self.scalars)?;
        for r in &self.relations.list {
            let p = pres.parse(r, &scalars)?;
            if p.is_zero() {
                return Err(CoreError::Presentation(format!("relation \"{r}\" is zero")));
            }
            pres.push(p);
        }
        pres.validate()?;
        Ok(pres)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const JORDAN: &str = r#"
name = "jordan"
expected_dimension = 9
[field]
p = 3
[generators]
names = ["x", "y"]
multidegrees = [[1], [1]]
[relations]
list = ["y*x - x*y + 1/2*x^2", "x^3", "y^3"]
"#;

    #[test]
    fn toml_round_trip() {
        let p = Presentation::from_toml(JORDAN).unwrap();
        assert_eq!(p.relations.len(), 3);
        assert!(p.is_weight_graded());
        let text = p.to_toml();
        let q = Presentation::from_toml(&text).unwrap();
        assert_eq!(p.relations, q.relations);
        assert_eq!(p.gens, q.gens);
    }

    #[test]
    fn extension_field_round_trip() {
        let f = Field::make(3, 2, None).unwrap();
        let mut p = Presentation::new("q", &f, vec![Generator::new("a"), Generator::new("b")]);
        p.push_str("b*a - (t+1)*a*b").unwrap();
        let q = Presentation::from_toml(&p.to_toml()).unwrap();
        assert_eq!(p.relations, q.relations);
    }

    #[test]
    fn inhomogeneous_multidegree_rejected() {
        let bad = JORDAN.replace("[[1], [1]]", "[[1], [2]]");
        assert!(Presentation::from_toml(&bad).is_err());
    }
}
