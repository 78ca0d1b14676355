use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;
use symsq_core::local_symbols::{AdditiveChar, MultChar, MultCharJson};
use symsq_core::padic::PadicJson;
use symsq_core::symsq::{DeformationPoint, GL2Rep, GL2RepJson};
use symsq_core::{FieldParams, PadicNumber};

use crate::CliError;

/// Input descriptor; each subcommand reads the fields it needs and falls
/// back to its default battery when they are absent.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Descriptor {
    pub pi: Option<GL2RepJson>,
    pub sigma: Option<GL2RepJson>,
    pub chi: Option<MultCharJson>,
    pub eta: Option<MultCharJson>,
    pub psi_scale: Option<PadicJson>,
    pub a: Option<PadicJson>,
    pub u: Option<[f64; 2]>,
    pub x: Option<Vec<PadicJson>>,
    pub m: Option<u32>,
    pub pairs: Option<Vec<[PadicJson; 2]>>,
    pub values: Option<Vec<PadicJson>>,
    pub samples: Option<usize>,
}

impl Descriptor {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("malformed descriptor: {e}")))
    }

    pub fn is_empty(&self) -> bool {
        self.pi.is_none()
            && self.sigma.is_none()
            && self.chi.is_none()
            && self.eta.is_none()
            && self.psi_scale.is_none()
            && self.a.is_none()
            && self.u.is_none()
            && self.x.is_none()
            && self.m.is_none()
            && self.pairs.is_none()
            && self.values.is_none()
            && self.samples.is_none()
    }
}

fn usage<E: std::fmt::Display>(what: &str) -> impl FnOnce(E) -> CliError + '_ {
    move |e| CliError::Usage(format!("{what}: {e}"))
}

pub fn padic(j: &PadicJson, field: &FieldParams, what: &str) -> Result<PadicNumber, CliError> {
    j.clone().into_padic(field).map_err(usage(what))
}

pub fn nonzero(j: &PadicJson, field: &FieldParams, what: &str) -> Result<PadicNumber, CliError> {
    let a = padic(j, field, what)?;
    if a.is_zero() {
        return Err(CliError::Usage(format!("{what} must be nonzero")));
    }
    Ok(a)
}

pub fn character(j: &MultCharJson, field: &FieldParams, what: &str) -> Result<MultChar, CliError> {
    let chi = MultChar::from_json(j).map_err(usage(what))?;
    if chi.p() != field.p() {
        return Err(CliError::Usage(format!("{what} has p = {} but the run uses p = {}", chi.p(), field.p())));
    }
    Ok(chi)
}

pub fn representation(j: &GL2RepJson, field: &FieldParams, what: &str) -> Result<GL2Rep, CliError> {
    let pi = GL2Rep::from_json(j).map_err(usage(what))?;
    if pi.p() != field.p() {
        return Err(CliError::Usage(format!("{what} has p = {} but the run uses p = {}", pi.p(), field.p())));
    }
    Ok(pi)
}

pub fn additive(j: Option<&PadicJson>, field: &FieldParams) -> Result<AdditiveChar, CliError> {
    let psi = AdditiveChar::standard(field);
    match j {
        None => Ok(psi),
        Some(a) => psi.scaled(&nonzero(a, field, "psi_scale")?).map_err(usage("psi_scale")),
    }
}

pub fn deformation(u: &[f64; 2]) -> DeformationPoint {
    DeformationPoint::new(Complex64::new(u[0], 0.0), Complex64::new(u[1], 0.0))
}
