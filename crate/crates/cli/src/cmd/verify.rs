use std::path::Path;

use anyhow::{bail, Context, Result};
use edgetri::verify::{ChainBudget, DEFAULT_EPSILON};
use edgetri::{
    critical_curve_h, verify_clt, verify_critical_scaling, verify_mixture, verify_mixture_sampler,
    verify_rate, verify_rate_sampler, verify_slln, CriticalSource, ModelParams, TheoremVerdict,
};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::args::{check_n, checked_params, Scale, Source, Suite, VerifyArgs};
use crate::output::{metadata, Sink};
use crate::Outcome;

/// Keys accepted in a verify config file; flags take precedence.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifyFile {
    alpha: Option<f64>,
    h: Option<f64>,
    n_list: Option<Vec<usize>>,
    seed: Option<u64>,
    burn_in_sweeps: Option<u64>,
    samples: Option<u64>,
    thinning: Option<u64>,
    epsilon: Option<f64>,
    source: Option<Source>,
    scale: Option<Scale>,
}

fn load(path: Option<&Path>) -> Result<VerifyFile> {
    let Some(p) = path else {
        return Ok(VerifyFile::default());
    };
    let text = std::fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?;
    toml::from_str(&text).with_context(|| format!("invalid verify config {}", p.display()))
}

/// One fully resolved verification run.
#[derive(Debug, Clone, Serialize)]
pub struct Job {
    pub suite: Suite,
    pub source: Source,
    pub params: ModelParams,
    pub n_list: Vec<usize>,
    pub scale: Scale,
    pub epsilon: f64,
    /// Present only for sampler-based runs.
    pub budget: Option<ChainBudget>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Plan {
    pub suite: Suite,
    pub jobs: Vec<Job>,
}

struct Merged {
    alpha: Option<f64>,
    h: Option<f64>,
    n_list: Option<Vec<usize>>,
    seed: Option<u64>,
    budget: ChainBudget,
    epsilon: f64,
    source: Option<Source>,
    scale: Scale,
}

fn merge(a: &VerifyArgs, f: VerifyFile) -> Merged {
    let d = ChainBudget::default();
    Merged {
        alpha: a.alpha.or(f.alpha),
        h: a.h.or(f.h),
        n_list: a.n_list.clone().or(f.n_list),
        seed: a.seed.or(f.seed),
        budget: ChainBudget {
            seed: 0,
            burn_in_sweeps: a.burn_in_sweeps.or(f.burn_in_sweeps).unwrap_or(d.burn_in_sweeps),
            samples: a.samples.or(f.samples).unwrap_or(d.samples),
            thinning: a.thinning.or(f.thinning).unwrap_or(d.thinning),
        },
        epsilon: a.epsilon.or(f.epsilon).unwrap_or(DEFAULT_EPSILON),
        source: a.source.or(f.source),
        scale: a.scale.or(f.scale).unwrap_or_default(),
    }
}

const MEANFIELD_SIZES: [usize; 4] = [250, 500, 1000, 2000];
const SAMPLER_SIZES: [usize; 3] = [32, 64, 128];

impl Merged {
    fn params_or(&self, alpha: f64, h: f64) -> Result<ModelParams> {
        checked_params(self.alpha.unwrap_or(alpha), self.h.unwrap_or(h))
    }

    fn sizes_or(&self, default: &[usize]) -> Vec<usize> {
        self.n_list.clone().unwrap_or_else(|| default.to_vec())
    }

    fn job(&self, suite: Suite, source: Source, params: ModelParams, n_list: Vec<usize>) -> Job {
        Job {
            suite,
            source,
            params,
            n_list,
            scale: self.scale,
            epsilon: self.epsilon,
            budget: (source == Source::Sampler).then_some(self.budget),
        }
    }

    fn single(&self, suite: Suite) -> Result<Vec<Job>> {
        let source = self.source.unwrap_or(match suite {
            Suite::Slln | Suite::Clt => Source::Sampler,
            _ => Source::MeanFieldExact,
        });
        let sampled = source == Source::Sampler;
        let default_sizes: &[usize] = if sampled { &SAMPLER_SIZES } else { &MEANFIELD_SIZES };
        Ok(match suite {
            Suite::Slln | Suite::Clt => {
                if !sampled {
                    bail!("source: the {suite:?} suite is sampler-based");
                }
                let sizes = match suite {
                    Suite::Clt => self.sizes_or(&[128]),
                    _ => self.sizes_or(&SAMPLER_SIZES),
                };
                vec![self.job(suite, source, self.params_or(1.0, 0.0)?, sizes)]
            }
            Suite::Critical => {
                if self.alpha.is_some() || self.h.is_some() {
                    bail!("alpha/h: the critical suite always runs at the critical point");
                }
                vec![self.job(suite, source, ModelParams::critical(), self.sizes_or(default_sizes))]
            }
            Suite::Mixture => {
                let alpha = self.alpha.unwrap_or(4.0);
                let h = match self.h {
                    Some(h) => h,
                    None => critical_curve_h(alpha, 1e-12).context("alpha: no critical curve here")?,
                };
                let sizes = if sampled { self.sizes_or(&[64]) } else { self.sizes_or(&[2000]) };
                vec![self.job(suite, source, checked_params(alpha, h)?, sizes)]
            }
            Suite::Rate => vec![self.job(suite, source, self.params_or(0.0, 0.0)?, self.sizes_or(default_sizes))],
            Suite::All => unreachable!(),
        })
    }

    fn plan(&self, suite: Suite) -> Result<Plan> {
        let jobs = if suite == Suite::All {
            if self.alpha.is_some() || self.h.is_some() || self.n_list.is_some() || self.source.is_some() {
                bail!("alpha/h/n_list/source: not accepted with the `all` suite, which uses canonical points");
            }
            let mut jobs = Vec::new();
            for s in [Suite::Slln, Suite::Clt, Suite::Critical, Suite::Mixture, Suite::Rate] {
                jobs.extend(self.single(s)?);
            }
            let critical_rate = self.job(
                Suite::Rate,
                Source::MeanFieldExact,
                ModelParams::critical(),
                MEANFIELD_SIZES.to_vec(),
            );
            jobs.push(critical_rate);
            jobs
        } else {
            self.single(suite)?
        };
        for j in &jobs {
            if j.n_list.is_empty() {
                bail!("n_list: must not be empty");
            }
            for &n in &j.n_list {
                check_n("n_list", n)?;
            }
        }
        Ok(Plan { suite, jobs })
    }
}

/// Resolve flags and config file into a plan; a missing seed is an error
/// whenever a chain would run.
pub fn resolve(a: &VerifyArgs) -> Result<Plan> {
    let merged = merge(a, load(a.config.as_deref())?);
    let mut plan = merged.plan(a.suite)?;
    let stochastic = plan.jobs.iter().any(|j| j.budget.is_some());
    if stochastic {
        let Some(seed) = merged.seed else {
            bail!("seed: required for sampler-based suites (pass --seed or set `seed` in the config)");
        };
        for j in &mut plan.jobs {
            if let Some(b) = &mut j.budget {
                b.seed = seed;
            }
        }
    }
    Ok(plan)
}

fn execute(j: &Job) -> Result<Vec<TheoremVerdict>> {
    let budget = j.budget.unwrap_or_default();
    let sampled = j.source == Source::Sampler;
    let context = || format!("{:?} suite at {:?}", j.suite, j.params);
    let out = match j.suite {
        Suite::Slln => vec![verify_slln(j.params, &j.n_list, &budget)],
        Suite::Clt => j.n_list.iter().map(|&n| verify_clt(j.params, n, &budget)).collect(),
        Suite::Critical => {
            let source = if sampled { CriticalSource::Sampler } else { CriticalSource::MeanFieldExact };
            vec![verify_critical_scaling(&j.n_list, &budget, source, j.scale.into())]
        }
        Suite::Mixture if sampled => j
            .n_list
            .iter()
            .map(|&n| verify_mixture_sampler(j.params, n, j.epsilon, &budget))
            .collect(),
        Suite::Mixture => vec![verify_mixture(j.params, &j.n_list, j.epsilon, j.scale.into())],
        Suite::Rate if sampled => vec![verify_rate_sampler(j.params, &j.n_list, &budget)],
        Suite::Rate => vec![verify_rate(j.params, &j.n_list, j.scale.into())],
        Suite::All => unreachable!(),
    };
    out.into_iter()
        .collect::<edgetri::Result<Vec<_>>>()
        .with_context(context)
}

pub fn run(a: VerifyArgs) -> Result<Outcome> {
    let plan = resolve(&a)?;
    let mut verdicts = Vec::new();
    for j in &plan.jobs {
        for v in execute(j)? {
            eprintln!("{v}");
            verdicts.push(v);
        }
    }
    let failed = verdicts.iter().any(TheoremVerdict::is_failure);
    let meta = metadata("verify", &plan)?;
    Sink::open(a.out.as_deref())?.write_json(meta, json!({ "pass": !failed, "verdicts": verdicts }))?;
    Ok(if failed { Outcome::VerificationFailed } else { Outcome::Pass })
}
