//! Run configuration: defaults, flat key=value config files, and flag
//! overrides.

use rotorlie::oplib::DriftSpec;
use rotorlie::rotor::{Polarization, RotationalConstants};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {reason}")]
    Unreadable { path: String, reason: String },
    #[error("malformed config line {line}: {text:?} (expected key=value)")]
    MalformedLine { line: usize, text: String },
    #[error("unknown config key {0:?}")]
    UnknownKey(String),
    #[error("invalid value for {key}: {value:?}")]
    BadValue { key: String, value: String },
    #[error("rotational constants must satisfy A > B > C > 0")]
    BadConstants,
    #[error("polarizations must be four of x/y/z separated by commas")]
    BadPolarizations,
    #[error("energies must be three comma-separated numbers with distinct spacings")]
    BadEnergies,
}

/// Resolved configuration for a run. Defaults: A=1, B=0.6, C=0.2,
/// μ=(1,1,1), tolerance 1e−9, polarizations x,y,y,z, energies 0, 1,
/// 1.414213562.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub dipole: [f64; 3],
    pub j: u32,
    pub subsystem: Option<(i64, i64, i64)>,
    pub tolerance: f64,
    pub polarizations: [Polarization; 4],
    pub energies: [f64; 3],
    pub threads: usize,
    pub budget: usize,
}

impl Default for RunConfig {
    // the third energy is deliberately a 1e-9 rationalization of an
    // irrational-like spacing, not the exact constant
    #[allow(clippy::approx_constant)]
    fn default() -> Self {
        Self {
            a: 1.0,
            b: 0.6,
            c: 0.2,
            dipole: [1.0, 1.0, 1.0],
            j: 0,
            subsystem: None,
            tolerance: 1e-9,
            polarizations: [
                Polarization::X,
                Polarization::Y,
                Polarization::Y,
                Polarization::Z,
            ],
            energies: [0.0, 1.0, 1.414213562],
            threads: 1,
            budget: 2_000_000,
        }
    }
}

impl RunConfig {
    pub fn constants(&self) -> Result<RotationalConstants, ConfigError> {
        RotationalConstants::new(self.a, self.b, self.c).map_err(|_| ConfigError::BadConstants)
    }

    /// Energies rationalized at 1e−9 into an exact drift specification.
    pub fn drift(&self) -> Result<DriftSpec, ConfigError> {
        let rationalize = |x: f64| {
            let scaled = (x * 1e9).round() as i64;
            num_rational::BigRational::new(scaled.into(), 1_000_000_000i64.into())
        };
        DriftSpec::new(
            rationalize(self.energies[0]),
            rationalize(self.energies[1]),
            rationalize(self.energies[2]),
        )
        .map_err(|_| ConfigError::BadEnergies)
    }

    pub fn apply_file(&mut self, path: &str) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Unreadable {
            path: path.to_string(),
            reason: e.to_string(),
        })?;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(ConfigError::MalformedLine {
                line: idx + 1,
                text: raw.to_string(),
            })?;
            self.apply_key(key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn apply_key(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let bad = || ConfigError::BadValue { key: key.to_string(), value: value.to_string() };
        let parse_f64 = |v: &str| v.parse::<f64>().map_err(|_| bad());
        match key {
            "a" => self.a = parse_f64(value)?,
            "b" => self.b = parse_f64(value)?,
            "c" => self.c = parse_f64(value)?,
            "mu_a" => self.dipole[0] = parse_f64(value)?,
            "mu_b" => self.dipole[1] = parse_f64(value)?,
            "mu_c" => self.dipole[2] = parse_f64(value)?,
            "j" => self.j = value.parse().map_err(|_| bad())?,
            "tau" | "tau_p" | "tau_pp" => {
                let v: i64 = value.parse().map_err(|_| bad())?;
                let (mut t, mut tp, mut tpp) = self.subsystem.unwrap_or((0, 0, 1));
                match key {
                    "tau" => t = v,
                    "tau_p" => tp = v,
                    _ => tpp = v,
                }
                self.subsystem = Some((t, tp, tpp));
            }
            "tolerance" => self.tolerance = parse_f64(value)?,
            "polarizations" => self.polarizations = parse_polarizations(value)?,
            "energies" => {
                let parts: Vec<f64> = value
                    .split(',')
                    .map(|p| p.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| bad())?;
                self.energies = parts.try_into().map_err(|_| ConfigError::BadEnergies)?;
            }
            "threads" => self.threads = value.parse().map_err(|_| bad())?,
            "budget" => self.budget = value.parse().map_err(|_| bad())?,
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }
}

pub fn parse_polarizations(s: &str) -> Result<[Polarization; 4], ConfigError> {
    let parts: Vec<Polarization> = s
        .split(',')
        .map(|p| Polarization::parse(p).ok_or(ConfigError::BadPolarizations))
        .collect::<Result<_, _>>()?;
    parts.try_into().map_err(|_| ConfigError::BadPolarizations)
}
