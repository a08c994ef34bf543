//! Bit-survivability experiments: embed a fixed payload, sanitize, extract,
//! and record which bits kept their value, over many independent trials.

mod report;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub use report::{emit_csv, emit_histogram, histogram_bins, read_stats_csv, render_histogram_svg, StatsRow};

use crate::codecs::{self, BitSequence, Carrier, ChannelId, CodecError, RawAsciiDocument};
use crate::sanitizer::{self, OutputFormat, RandomSource};
use crate::stl::{self, StlError, StlFormat};

pub const DEFAULT_PAYLOAD_BITS: usize = 1024;
pub const DEFAULT_TRIALS: usize = 100;

/// Which sanitizer sits between embed and extract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SanitizerMode {
    /// Only the pass that targets the channel under test. For the robust-pair
    /// codec that is the facet shuffle; for number and whitespace it is the
    /// canonical ASCII rewrite.
    Channel,
    /// The complete byte-level pipeline.
    Full,
    /// Control run.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialConfig {
    pub channel: ChannelId,
    pub payload_bits: usize,
    pub trials: usize,
    /// `None` draws payload and sanitizer randomness from the OS.
    pub seed: Option<u64>,
    pub sanitizer: SanitizerMode,
}

impl TrialConfig {
    pub fn new(channel: ChannelId) -> Self {
        TrialConfig {
            channel,
            payload_bits: DEFAULT_PAYLOAD_BITS,
            trials: DEFAULT_TRIALS,
            seed: None,
            sanitizer: SanitizerMode::Channel,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Stl(#[from] StlError),
    #[error("at least one trial is required")]
    NoTrials,
    #[error("I/O error on {path}: {message}")]
    Io { path: String, message: String },
}

/// One trial's outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialRow {
    /// `survived[i]` iff extracted bit `i` equals payload bit `i`.
    pub survived: Vec<bool>,
    /// Vertex channel only: whether the carrying facet kept its exact vertex listing.
    pub arrangement_kept: Option<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurvivalMatrix {
    pub payload: BitSequence,
    pub rows: Vec<TrialRow>,
}

impl SurvivalMatrix {
    pub fn trials(&self) -> usize {
        self.rows.len()
    }

    pub fn bits(&self) -> usize {
        self.payload.len()
    }
}

fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

fn population_variance(xs: &[f64]) -> Option<f64> {
    let m = mean(xs)?;
    Some(xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64)
}

fn pct(hits: usize, total: usize) -> f64 {
    100.0 * hits as f64 / total as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalStats {
    /// Undefined (empty) for zero-length payloads.
    pub per_trial_survival_pct: Vec<f64>,
    pub mean_pct: Option<f64>,
    /// Population variance of the per-trial percentages.
    pub variance_pct2: Option<f64>,
    pub per_bit_survival_pct: Vec<f64>,
    /// Payload bit values, aligned with `per_bit_survival_pct`.
    pub payload: BitSequence,
    /// Per-bit survival split by payload bit value: `[bits == 0, bits == 1]`.
    pub per_bit_by_value: [Vec<f64>; 2],
    /// Per-trial percentage of carriers whose arrangement was untouched.
    pub arrangement_pct: Option<Vec<f64>>,
}

impl SurvivalStats {
    pub fn from_matrix(m: &SurvivalMatrix) -> Self {
        let n = m.bits();
        let per_trial: Vec<f64> = if n == 0 {
            Vec::new()
        } else {
            m.rows.iter().map(|r| pct(r.survived.iter().filter(|&&s| s).count(), n)).collect()
        };
        let per_bit: Vec<f64> = (0..n)
            .map(|i| pct(m.rows.iter().filter(|r| r.survived[i]).count(), m.trials()))
            .collect();
        let mut by_value = [Vec::new(), Vec::new()];
        for (b, &p) in m.payload.iter().zip(&per_bit) {
            by_value[b as usize].push(p);
        }
        let arrangement_pct = (n > 0)
            .then(|| {
                m.rows
                    .iter()
                    .map(|r| r.arrangement_kept.as_ref().map(|a| pct(a.iter().filter(|&&k| k).count(), n)))
                    .collect::<Option<Vec<f64>>>()
            })
            .flatten();
        SurvivalStats {
            mean_pct: mean(&per_trial),
            variance_pct2: population_variance(&per_trial),
            per_trial_survival_pct: per_trial,
            per_bit_survival_pct: per_bit,
            payload: m.payload.clone(),
            per_bit_by_value: by_value,
            arrangement_pct,
        }
    }

    /// Mean per-bit survival over the bits whose payload value is `value`.
    pub fn value_mean_pct(&self, value: bool) -> Option<f64> {
        mean(&self.per_bit_by_value[value as usize])
    }

    pub fn arrangement_mean_pct(&self) -> Option<f64> {
        self.arrangement_pct.as_deref().and_then(mean)
    }
}

/// A configured experiment over one carrier with one fixed payload.
#[derive(Debug, Clone)]
pub struct Experiment<'a> {
    config: TrialConfig,
    carrier: &'a Carrier,
    payload: BitSequence,
}

const PAYLOAD_STREAM: u64 = u64::MAX;

fn stream_rng(seed: Option<u64>, stream: u64) -> ChaCha20Rng {
    match seed {
        Some(s) => {
            let mut rng = ChaCha20Rng::seed_from_u64(s);
            rng.set_stream(stream);
            rng
        }
        None => ChaCha20Rng::from_os_rng(),
    }
}

impl<'a> Experiment<'a> {
    pub fn new(config: TrialConfig, carrier: &'a Carrier) -> Result<Self, EvalError> {
        let payload = BitSequence::random(&mut stream_rng(config.seed, PAYLOAD_STREAM), config.payload_bits);
        Self::with_payload(config, carrier, payload)
    }

    pub fn with_payload(mut config: TrialConfig, carrier: &'a Carrier, payload: BitSequence) -> Result<Self, EvalError> {
        if config.trials == 0 {
            return Err(EvalError::NoTrials);
        }
        config.payload_bits = payload.len();
        let cap = codecs::capacity(carrier, config.channel)?;
        codecs::check_capacity(config.channel, payload.len(), cap)?;
        Ok(Experiment {
            config,
            carrier,
            payload,
        })
    }

    pub fn config(&self) -> &TrialConfig {
        &self.config
    }

    pub fn payload(&self) -> &BitSequence {
        &self.payload
    }

    fn sanitize(&self, embedded: Carrier, trial_index: usize) -> Result<Carrier, EvalError> {
        let channel = self.config.channel;
        let mut rng = stream_rng(self.config.seed, trial_index as u64);
        Ok(match self.config.sanitizer {
            SanitizerMode::None => embedded,
            SanitizerMode::Full => {
                let format = embedded.format();
                let source = match self.config.seed {
                    // one seeded stream per trial, distinct from the payload stream
                    Some(_) => RandomSource::Seeded(rand::Rng::random(&mut rng)),
                    None => RandomSource::Cryptographic,
                };
                let (bytes, _) = sanitizer::sanitize_all(&embedded.to_bytes(format), &source, OutputFormat::Preserve)?;
                Carrier::from_bytes(&bytes)?
            }
            SanitizerMode::Channel => match channel {
                ChannelId::Facet | ChannelId::RobustPair => {
                    let mut m = embedded.into_model();
                    sanitizer::sanitize_facet_channel(&mut m, &mut rng);
                    Carrier::Model(m)
                }
                ChannelId::Vertex => {
                    let mut m = embedded.into_model();
                    sanitizer::sanitize_vertex_channel(&mut m, &mut rng);
                    Carrier::Model(m)
                }
                ChannelId::Normal => {
                    let mut m = embedded.into_model();
                    sanitizer::sanitize_normal_channel(&mut m);
                    Carrier::Model(m)
                }
                ChannelId::Number | ChannelId::Whitespace => {
                    let text = stl::write_canonical_ascii(embedded.model());
                    Carrier::Text(RawAsciiDocument::parse(text)?)
                }
            },
        })
    }

    /// Embed, sanitize, extract and compare bit by bit.
    pub fn run_trial(&self, trial_index: usize) -> Result<TrialRow, EvalError> {
        let channel = self.config.channel;
        let embedded = codecs::embed(self.carrier, channel, &self.payload)?;
        let before = (channel == ChannelId::Vertex).then(|| embedded.model().clone());
        let sanitized = self.sanitize(embedded, trial_index)?;
        let extracted = codecs::extract(&sanitized, channel, self.payload.len())?;
        let survived = self.payload.iter().zip(extracted.iter()).map(|(a, b)| a == b).collect();
        let arrangement_kept = before.map(|b| {
            let after = sanitized.model();
            codecs::vertex_slots(&b)
                .into_iter()
                .take(self.payload.len())
                .map(|i| after.facets.get(i).is_some_and(|f| f.vertices == b.facets[i].vertices))
                .collect()
        });
        Ok(TrialRow {
            survived,
            arrangement_kept,
        })
    }

    pub fn run(&self) -> Result<(SurvivalMatrix, SurvivalStats), EvalError> {
        let rows = (0..self.config.trials)
            .map(|t| self.run_trial(t))
            .collect::<Result<Vec<_>, _>>()?;
        let matrix = SurvivalMatrix {
            payload: self.payload.clone(),
            rows,
        };
        let stats = SurvivalStats::from_matrix(&matrix);
        Ok((matrix, stats))
    }
}

/// Embed/sanitize/extract over `trials` runs and aggregate.
pub fn run_experiment(config: TrialConfig, carrier: &Carrier) -> Result<(SurvivalMatrix, SurvivalStats), EvalError> {
    Experiment::new(config, carrier)?.run()
}

/// Default carrier: the 5120-facet icosphere, as ASCII text for the
/// text-only channels and binary otherwise.
pub fn default_carrier(channel: ChannelId) -> Carrier {
    let mesh = stl::generate_test_mesh(4);
    if channel.is_text_only() {
        let text = stl::write_canonical_ascii(&stl::StlModel {
            source_format: StlFormat::Ascii,
            ..mesh
        });
        Carrier::Text(RawAsciiDocument::parse(text).expect("canonical output parses"))
    } else {
        Carrier::Model(mesh)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn within(name: &'static str, value: Option<f64>, lo: f64, hi: f64) -> GateResult {
    let passed = value.is_some_and(|v| (lo..=hi).contains(&v));
    let shown = value.map_or("undefined".to_string(), |v| format!("{v:.3}"));
    GateResult {
        name,
        passed,
        detail: format!("{shown} in [{lo}, {hi}]"),
    }
}

/// Statistical gates for a finished experiment.
///
/// The control run (no sanitizer) must preserve every bit at any size. The
/// distributional gates are calibrated for 1024 bits x 100 trials and are
/// only applied at that size.
pub fn gates(config: &TrialConfig, stats: &SurvivalStats) -> Vec<GateResult> {
    let mut out = Vec::new();
    if config.sanitizer == SanitizerMode::None {
        if config.payload_bits > 0 {
            out.push(within("control run preserves all bits", stats.mean_pct, 100.0, 100.0));
        }
        return out;
    }
    if config.payload_bits != DEFAULT_PAYLOAD_BITS || config.trials != DEFAULT_TRIALS {
        return out;
    }
    match (config.channel, config.sanitizer) {
        (ChannelId::Facet, SanitizerMode::Channel) => {
            out.push(within("facet mean survival", stats.mean_pct, 48.5, 51.5));
            out.push(within("facet survival variance", stats.variance_pct2, 1.3, 3.2));
        }
        (ChannelId::Vertex, SanitizerMode::Channel) => {
            out.push(within("vertex mean survival", stats.mean_pct, 48.0, 52.0));
            let third = 100.0 / 3.0;
            out.push(within("vertex survival of 1-bits", stats.value_mean_pct(true), third - 2.5, third + 2.5));
            out.push(within(
                "vertex survival of 0-bits",
                stats.value_mean_pct(false),
                2.0 * third - 2.5,
                2.0 * third + 2.5,
            ));
        }
        (ChannelId::RobustPair, _) => {
            out.push(within("robust-pair mean survival", stats.mean_pct, 45.0, 55.0));
        }
        _ => {}
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stl::generate_test_mesh;

    fn seeded(channel: ChannelId, bits: usize, trials: usize, mode: SanitizerMode) -> TrialConfig {
        TrialConfig {
            channel,
            payload_bits: bits,
            trials,
            seed: Some(17),
            sanitizer: mode,
        }
    }

    #[test]
    fn control_runs_survive_completely() {
        for ch in ChannelId::ALL {
            let carrier = if ch.is_text_only() {
                Carrier::Text(RawAsciiDocument::parse(stl::write_canonical_ascii(&generate_test_mesh(1))).unwrap())
            } else {
                Carrier::Model(generate_test_mesh(2))
            };
            let cfg = seeded(ch, 64, 3, SanitizerMode::None);
            let (m, s) = run_experiment(cfg, &carrier).unwrap();
            assert!(m.rows.iter().all(|r| r.survived.iter().all(|&b| b)), "{ch}");
            assert_eq!(s.mean_pct, Some(100.0));
            assert!(gates(&cfg, &s).iter().all(|g| g.passed));
        }
    }

    #[test]
    fn empty_payload_is_well_defined() {
        let carrier = Carrier::Model(generate_test_mesh(0));
        let (m, s) = run_experiment(seeded(ChannelId::Facet, 0, 1, SanitizerMode::Channel), &carrier).unwrap();
        assert_eq!(m.trials(), 1);
        assert_eq!(m.bits(), 0);
        assert_eq!(s.mean_pct, None);
        assert_eq!(s.variance_pct2, None);
        assert!(s.per_bit_survival_pct.is_empty());
    }

    #[test]
    fn invalid_configs() {
        let carrier = Carrier::Model(generate_test_mesh(0));
        assert_eq!(
            run_experiment(seeded(ChannelId::Facet, 1, 0, SanitizerMode::Channel), &carrier).unwrap_err(),
            EvalError::NoTrials
        );
        assert!(matches!(
            run_experiment(seeded(ChannelId::Facet, 11, 1, SanitizerMode::Channel), &carrier),
            Err(EvalError::Codec(CodecError::CapacityExceeded { .. }))
        ));
        assert!(matches!(
            run_experiment(seeded(ChannelId::Number, 1, 1, SanitizerMode::Channel), &carrier),
            Err(EvalError::Codec(CodecError::ChannelUnavailable { .. }))
        ));
    }

    #[test]
    fn seeded_runs_are_deterministic() {
        let carrier = Carrier::Model(generate_test_mesh(2));
        let cfg = seeded(ChannelId::Vertex, 100, 5, SanitizerMode::Channel);
        assert_eq!(run_experiment(cfg, &carrier).unwrap(), run_experiment(cfg, &carrier).unwrap());
    }

    #[test]
    fn vertex_arrangement_metric() {
        let carrier = Carrier::Model(generate_test_mesh(3));
        let (_, s) = run_experiment(seeded(ChannelId::Vertex, 1024, 20, SanitizerMode::Channel), &carrier).unwrap();
        let kept = s.arrangement_mean_pct().unwrap();
        assert!((kept - 100.0 / 3.0).abs() < 3.0, "{kept}");
    }

    #[test]
    fn number_channel_erased_by_canonical_rewrite() {
        let carrier = default_carrier(ChannelId::Number);
        let (m, _) = run_experiment(seeded(ChannelId::Number, 512, 2, SanitizerMode::Channel), &carrier).unwrap();
        // canonical text is all standard notation, so exactly the 0-bits survive
        for r in &m.rows {
            for (s, b) in r.survived.iter().zip(m.payload.iter()) {
                assert_eq!(*s, !b);
            }
        }
    }

    #[test]
    fn stats_by_hand() {
        let m = SurvivalMatrix {
            payload: BitSequence::new(vec![true, false]),
            rows: vec![
                TrialRow { survived: vec![true, true], arrangement_kept: None },
                TrialRow { survived: vec![false, true], arrangement_kept: None },
            ],
        };
        let s = SurvivalStats::from_matrix(&m);
        assert_eq!(s.per_trial_survival_pct, vec![100.0, 50.0]);
        assert_eq!(s.mean_pct, Some(75.0));
        assert_eq!(s.variance_pct2, Some(625.0));
        assert_eq!(s.per_bit_survival_pct, vec![50.0, 100.0]);
        assert_eq!(s.value_mean_pct(true), Some(50.0));
        assert_eq!(s.value_mean_pct(false), Some(100.0));
        assert_eq!(s.arrangement_pct, None);
    }
}
