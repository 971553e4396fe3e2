//! Certificate-based classifier for the doubly-stochastic channel hierarchy
//! MU ⊆ CAT ⊆ EQ∩DS ⊆ F ⊆ DS.

use catdil::channel::{
    channel_distance, is_doubly_stochastic, ChannelChoi, Dilation, MixedUnitaryDecomposition,
};
use catdil::states::ToleranceSpec;
use catdil::verify::structural_catalytic_check;
use catdil::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "CERTIFIED_IN")]
    CertifiedIn,
    #[serde(rename = "CERTIFIED_OUT")]
    CertifiedOut,
    #[serde(rename = "UNKNOWN")]
    Unknown,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassReport {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Value>,
}

impl ClassReport {
    fn unknown() -> Self {
        Self {
            status: Status::Unknown,
            certificate: None,
        }
    }
}

/// Per-class membership statuses, ordered by inclusion. Constructed only
/// through `HierarchyReport::new`, which enforces monotone consistency.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HierarchyReport {
    pub mu: ClassReport,
    pub cat: ClassReport,
    pub eq_ds: ClassReport,
    pub f: ClassReport,
    pub ds: ClassReport,
}

impl HierarchyReport {
    pub fn new(
        mu: ClassReport,
        cat: ClassReport,
        eq_ds: ClassReport,
        f: ClassReport,
        ds: ClassReport,
    ) -> Result<Self> {
        let rep = Self {
            mu,
            cat,
            eq_ds,
            f,
            ds,
        };
        let chain = rep.chain();
        for i in 0..chain.len() {
            for j in (i + 1)..chain.len() {
                if chain[i].0 == Status::CertifiedIn && chain[j].0 == Status::CertifiedOut {
                    return Err(Error::Invalid(format!(
                        "inconsistent hierarchy: {} CERTIFIED_IN but superset {} CERTIFIED_OUT",
                        chain[i].1, chain[j].1
                    )));
                }
            }
        }
        Ok(rep)
    }

    fn chain(&self) -> Vec<(Status, &'static str)> {
        vec![
            (self.mu.status, "MU"),
            (self.cat.status, "CAT"),
            (self.eq_ds.status, "EQ∩DS"),
            (self.f.status, "F"),
            (self.ds.status, "DS"),
        ]
    }

    /// True iff the inclusion chain is respected by the statuses.
    pub fn is_monotone(&self) -> bool {
        let chain = self.chain();
        for i in 0..chain.len() {
            for j in (i + 1)..chain.len() {
                if chain[i].0 == Status::CertifiedIn && chain[j].0 == Status::CertifiedOut {
                    return false;
                }
            }
        }
        true
    }
}

/// Optional membership certificates supplied alongside a channel.
#[derive(Default)]
pub struct Certificates {
    pub mixed_unitary: Option<MixedUnitaryDecomposition>,
    pub dilation: Option<Dilation>,
}

/// Classify a channel in the hierarchy. DS is decided directly; every other
/// CERTIFIED_IN requires a verified certificate; a DS failure propagates
/// CERTIFIED_OUT down the chain; F is never CERTIFIED_OUT on a DS channel.
pub fn classify(
    channel: &ChannelChoi,
    certs: &Certificates,
    tol: &ToleranceSpec,
) -> Result<HierarchyReport> {
    if channel.dim_in != channel.dim_out {
        return Err(Error::Dimension("classification needs a square channel".into()));
    }
    channel.validate(tol)?;

    let ds_rep = is_doubly_stochastic(channel, tol.abs_tol)?;
    let ds_residual = ds_rep.worst().map(|w| w.value).unwrap_or(0.0);
    let ds_in = ds_rep.pass;

    let mut mu = ClassReport::unknown();
    let mut cat = ClassReport::unknown();
    let mut eq_ds = ClassReport::unknown();
    let mut f = ClassReport::unknown();
    let ds = ClassReport {
        status: if ds_in {
            Status::CertifiedIn
        } else {
            Status::CertifiedOut
        },
        certificate: Some(json!({
            "unit_preservation_residual": ds_residual,
            "threshold": tol.abs_tol,
        })),
    };

    if !ds_in {
        // everything below DS is excluded
        let out = |reason: &str| ClassReport {
            status: Status::CertifiedOut,
            certificate: Some(json!({
                "reason": reason,
                "unit_preservation_residual": ds_residual,
            })),
        };
        let r = "not doubly stochastic";
        return HierarchyReport::new(out(r), out(r), out(r), out(r), ds);
    }

    if let Some(dec) = &certs.mixed_unitary {
        let dist = channel_distance(&dec.channel()?, channel)?;
        if dist >= tol.abs_tol {
            return Err(Error::Invalid(format!(
                "mixed-unitary certificate does not reproduce the channel: distance {dist:.3e}"
            )));
        }
        let cert = json!({
            "kind": "mixed_unitary_decomposition",
            "terms": dec.terms.len(),
            "channel_distance": dist,
        });
        mu = ClassReport {
            status: Status::CertifiedIn,
            certificate: Some(cert),
        };
    }

    if let Some(dil) = &certs.dilation {
        let built = catdil::channel::channel_of_dilation(dil)?;
        let dist = channel_distance(&built, channel)?;
        if dist >= tol.abs_tol {
            return Err(Error::Invalid(format!(
                "dilation certificate does not reproduce the channel: distance {dist:.3e}"
            )));
        }
        let (rep, _) = structural_catalytic_check(dil, tol)?;
        if rep.pass {
            cat = ClassReport {
                status: Status::CertifiedIn,
                certificate: Some(json!({
                    "kind": "catalytic_dilation",
                    "marginal_residual": rep.marginal_residual,
                    "structural_commutator_residual": rep.structural_commutator_residual,
                    "channel_distance": dist,
                })),
            };
        } else if rep.structural_commutator_residual < tol.abs_tol {
            // strongly factorizable: [U, 1 ⊗ ω_env] = 0 on a DS channel
            eq_ds = ClassReport {
                status: Status::CertifiedIn,
                certificate: Some(json!({
                    "kind": "strongly_factorizable_dilation",
                    "structural_commutator_residual": rep.structural_commutator_residual,
                    "channel_distance": dist,
                })),
            };
        }
    }

    // propagate CERTIFIED_IN up the inclusion chain
    if mu.status == Status::CertifiedIn && cat.status != Status::CertifiedIn {
        cat = ClassReport {
            status: Status::CertifiedIn,
            certificate: Some(json!({"kind": "inclusion", "from": "MU"})),
        };
    }
    if cat.status == Status::CertifiedIn && eq_ds.status != Status::CertifiedIn {
        eq_ds = ClassReport {
            status: Status::CertifiedIn,
            certificate: Some(json!({"kind": "inclusion", "from": "CAT"})),
        };
    }
    if eq_ds.status == Status::CertifiedIn {
        // strong factorizability implies factorizability
        f = ClassReport {
            status: Status::CertifiedIn,
            certificate: Some(json!({"kind": "inclusion", "from": "EQ∩DS"})),
        };
    }

    HierarchyReport::new(mu, cat, eq_ds, f, ds)
}
