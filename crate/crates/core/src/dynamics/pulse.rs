use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const PULSE_SEQUENCE_SCHEMA: &str = "spinlat.pulse-sequence.v1";

/// Which microwave pair couplings a segment drives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coupling {
    /// Only `|l, down> <-> |l, up>`.
    R,
    /// Only `|l, down> <-> |l - 1, up>`.
    L,
    /// Both pairs, with rates `omega_R` and `omega_L`.
    #[serde(rename = "both")]
    Both,
}

impl Coupling {
    /// The other isolated mode; `Both` maps to itself.
    pub fn alternate(self) -> Coupling {
        match self {
            Coupling::R => Coupling::L,
            Coupling::L => Coupling::R,
            Coupling::Both => Coupling::Both,
        }
    }
}

/// One piecewise-constant stretch of microwave and gradient control.
///
/// In `R` and `L` mode the driven pair couples at `omega` and the other pair
/// is exactly decoupled; `omega_R` / `omega_L` are ignored. In `both` mode the
/// pair rates are `omega_R` and `omega_L`, and `omega` only records the bare
/// microwave Rabi frequency.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ControlSegment {
    pub duration: f64,
    pub omega: f64,
    pub phi: f64,
    pub delta: f64,
    pub coupling: Coupling,
    #[serde(rename = "omega_R", default)]
    pub omega_r: f64,
    #[serde(rename = "omega_L", default)]
    pub omega_l: f64,
    #[serde(default)]
    pub force: f64,
    #[serde(default)]
    pub delta_l: f64,
}

impl ControlSegment {
    /// Resonant drive of one isolated pair.
    pub fn pulse(coupling: Coupling, omega: f64, phi: f64, duration: f64) -> Self {
        ControlSegment {
            duration,
            omega,
            phi,
            delta: 0.0,
            coupling,
            omega_r: 0.0,
            omega_l: 0.0,
            force: 0.0,
            delta_l: 0.0,
        }
    }

    /// Both pairs driven at once, e.g. with finite Franck-Condon isolation.
    pub fn both(omega_r: f64, omega_l: f64, phi: f64, duration: f64) -> Self {
        ControlSegment {
            omega: omega_r.abs().max(omega_l.abs()),
            omega_r,
            omega_l,
            ..Self::pulse(Coupling::Both, 0.0, phi, duration)
        }
    }

    /// No microwave, no gradient.
    pub fn idle(duration: f64) -> Self {
        Self::pulse(Coupling::R, 0.0, 0.0, duration)
    }

    pub fn with_detuning(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_gradient(mut self, force: f64, delta_l: f64) -> Self {
        self.force = force;
        self.delta_l = delta_l;
        self
    }

    /// Effective `(Omega_R, Omega_L)`.
    pub fn rates(&self) -> (f64, f64) {
        match self.coupling {
            Coupling::R => (self.omega, 0.0),
            Coupling::L => (0.0, self.omega),
            Coupling::Both => (self.omega_r, self.omega_l),
        }
    }

    /// The single pair this segment drives, if the other rate is zero.
    pub fn isolated_mode(&self) -> Option<Coupling> {
        match self.rates() {
            (_, l) if l == 0.0 => Some(Coupling::R),
            (r, _) if r == 0.0 => Some(Coupling::L),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.duration,
            self.omega,
            self.phi,
            self.delta,
            self.omega_r,
            self.omega_l,
            self.force,
            self.delta_l,
        ]
        .iter()
        .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidParameter("non-finite segment field".into()));
        }
        if self.duration < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "negative duration {}",
                self.duration
            )));
        }
        if !(0.0..1.0).contains(&self.delta_l) {
            return Err(Error::InvalidParameter(format!(
                "delta_l must lie in [0, 1), got {}",
                self.delta_l
            )));
        }
        Ok(())
    }
}

/// Ordered list of control segments, applied first to last.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PulseSequenceRecord", into = "PulseSequenceRecord")]
pub struct PulseSequence {
    pub segments: Vec<ControlSegment>,
}

impl PulseSequence {
    pub fn new(segments: Vec<ControlSegment>) -> Self {
        PulseSequence { segments }
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ControlSegment> {
        self.segments.iter()
    }

    pub fn push(&mut self, segment: ControlSegment) {
        self.segments.push(segment);
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &PulseSequence) -> PulseSequence {
        let mut segments = self.segments.clone();
        segments.extend(other.segments.iter().cloned());
        PulseSequence { segments }
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().fold(0.0, |t, s| t + s.duration)
    }

    pub fn has_gradient(&self) -> bool {
        self.segments.iter().any(|s| s.force != 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        self.segments.iter().try_for_each(ControlSegment::validate)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl FromIterator<ControlSegment> for PulseSequence {
    fn from_iter<I: IntoIterator<Item = ControlSegment>>(iter: I) -> Self {
        PulseSequence {
            segments: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a PulseSequence {
    type Item = &'a ControlSegment;
    type IntoIter = std::slice::Iter<'a, ControlSegment>;

    fn into_iter(self) -> Self::IntoIter {
        self.segments.iter()
    }
}

#[derive(Serialize, Deserialize)]
struct PulseSequenceRecord {
    schema: String,
    segments: Vec<ControlSegment>,
}

impl TryFrom<PulseSequenceRecord> for PulseSequence {
    type Error = Error;

    fn try_from(r: PulseSequenceRecord) -> Result<Self> {
        if r.schema != PULSE_SEQUENCE_SCHEMA {
            return Err(Error::Schema(format!(
                "expected schema {PULSE_SEQUENCE_SCHEMA}, found {}",
                r.schema
            )));
        }
        let seq = PulseSequence { segments: r.segments };
        seq.validate()?;
        Ok(seq)
    }
}

impl From<PulseSequence> for PulseSequenceRecord {
    fn from(s: PulseSequence) -> Self {
        PulseSequenceRecord {
            schema: PULSE_SEQUENCE_SCHEMA.into(),
            segments: s.segments,
        }
    }
}
