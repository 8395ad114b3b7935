//! Potential-spec files: `{"phi0": <potential>, "phi1": <potential>}` with
//! `phi0` defaulting to zero. See the README for the schema.

use std::collections::BTreeMap;

use gjl_core::counterexample::{build_h, build_h_tilde, jets_at_origin, TorusPotential, TrigTerm};
use gjl_core::jet_propagation::JetTable;
use gjl_core::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JetLayout {
    /// `x^(2m-2i) y^(2i)`, `i = 0..=m`
    #[default]
    Even,
    /// `x^(2m-i) y^i`, `i = 0..=2m`; odd entries must vanish.
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
#[derive(Default)]
pub enum PotentialSpec {
    #[default]
    Zero,
    Terms {
        terms: Vec<TrigTerm>,
    },
    Jets {
        #[serde(default)]
        layout: JetLayout,
        /// Keyed by total degree.
        #[serde(deserialize_with = "degree_keys")]
        orders: BTreeMap<usize, Vec<f64>>,
    },
    H {
        n: usize,
    },
    HTilde {
        n: usize,
        kappa: usize,
        chi: f64,
    },
}

// Tagged enums buffer their content, which loses serde_json's
// string-to-integer key coercion, so the keys are parsed by hand.
fn degree_keys<'de, D>(de: D) -> std::result::Result<BTreeMap<usize, Vec<f64>>, D::Error>
where
    D: serde::Deserializer<'de>,
{
    let raw = BTreeMap::<String, Vec<f64>>::deserialize(de)?;
    raw.into_iter()
        .map(|(k, v)| {
            k.trim().parse::<usize>().map(|d| (d, v)).map_err(|_| {
                serde::de::Error::custom(format!("jet degree `{k}` is not an integer"))
            })
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    #[serde(default)]
    pub phi0: PotentialSpec,
    pub phi1: PotentialSpec,
}

impl PotentialSpec {
    /// The trigonometric potential, if the spec describes one.
    pub fn potential(&self) -> Result<TorusPotential> {
        match self {
            Self::Zero => Ok(TorusPotential::zero()),
            Self::Terms { terms } => TorusPotential::new(terms.clone()),
            Self::H { n } => build_h(*n),
            Self::HTilde { n, kappa, chi } => build_h_tilde(*n, *kappa, *chi),
            Self::Jets { .. } => Err(Error::InvalidArgument(
                "raw jet tables do not define a potential on the torus".into(),
            )),
        }
    }

    pub fn jets(&self, max_order: usize) -> Result<JetTable> {
        match self {
            Self::Jets { layout, orders } => {
                let table = match layout {
                    JetLayout::Even => orders
                        .iter()
                        .try_fold(JetTable::new(), |t, (d, c)| t.with_order(*d, c.clone()))?,
                    JetLayout::Full => JetTable::from_full(orders)?,
                };
                // orders above max_order play no role
                let mut out = JetTable::new();
                for (d, c) in table.orders().range(..=max_order) {
                    out.set_order(*d, c.clone())?;
                }
                Ok(out)
            }
            other => jets_at_origin(&other.potential()?, max_order.max(2)),
        }
    }
}

pub fn parse(text: &str) -> Result<ProblemSpec> {
    serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("potential spec: {e}")))
}
