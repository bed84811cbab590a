//! Batch front end: parse fixtures, run one computation, print a report.
//!
//! Reports are JSON objects tagged with `"schema": "galmon/1"`. Every list
//! in a report follows the canonical order of the underlying values, so
//! identical inputs give byte-identical output.

// errors surface once per process; boxing them buys nothing
#![allow(clippy::result_large_err)]

pub mod dot;
pub mod report;
pub mod schema;

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use galmon::actions::canonical_site_with;
use galmon::ends::DEFAULT_MAX_FAMILIES;
use galmon::sampling::DEFAULT_SEED;
use galmon::{Error, MAction, Monoid, Site, SiteSpec};
use thiserror::Error;

pub const SCHEMA: &str = "galmon/1";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: {msg}")]
    Schema { path: String, msg: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    /// 2 for the sizing guard, 1 for every other failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::SizeLimit { .. }) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Check monoid and action axioms.
    Validate,
    /// List submonoids and subgroups.
    Subgroups,
    /// Decide whether the fusion map is invertible.
    Hopf,
    /// Invariants of a homomorphism over a site.
    Inv,
    /// Stabilizer of a subfunctor, pointwise and through ends.
    Stab,
    /// End of the forgetful functor, its monoid and the reconstruction map.
    End,
    /// The Galois correspondence between submonoids and subfunctors.
    Corr,
    /// Coinduce an action along a homomorphism.
    Coinduce,
    /// Galois-connection laws and seeded adjunction sweeps.
    Laws,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Dot,
}

/// One batch job.
#[derive(Debug, Clone, Parser)]
#[command(name = "galmon", version, about = "Galois correspondences for finite monoid actions")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Monoid file.
    #[arg(long)]
    pub monoid: Option<PathBuf>,
    /// Action file; repeatable. Actions join the site under their file stem.
    #[arg(long)]
    pub action: Vec<PathBuf>,
    /// Site description, e.g. `free+cosets`, `free:2+trivial`, `custom:<dir>`.
    #[arg(long)]
    pub site: Option<String>,
    /// Subfunctor file.
    #[arg(long)]
    pub sub: Option<PathBuf>,
    /// Homomorphism file.
    #[arg(long)]
    pub hom: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub out: Output,
    /// Seed for randomized sweeps.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Search-node budget for end computations.
    #[arg(long, default_value_t = DEFAULT_MAX_FAMILIES)]
    pub max_families: u64,
}

impl Cli {
    fn monoid(&self) -> Result<Monoid, CliError> {
        let path = self.monoid.as_ref().ok_or_else(|| CliError::Usage("--monoid is required".into()))?;
        schema::parse_monoid(path)
    }

    fn actions(&self, m: &Monoid) -> Result<Vec<(String, MAction)>, CliError> {
        self.action.iter().map(|p| Ok((schema::action_name(p), schema::parse_action(p, m)?))).collect()
    }

    /// The site named by `--site` (or the default for the monoid) plus
    /// every `--action`.
    fn site(&self, m: &Monoid) -> Result<(String, Site), CliError> {
        let spec = match &self.site {
            Some(s) => s.parse::<SiteSpec>()?,
            None => SiteSpec::default_for(m),
        };
        let mut io_error = None;
        let base = canonical_site_with(m, &spec, &mut |dir| {
            schema::load_action_dir(std::path::Path::new(dir), m).map_err(|e| {
                let msg = e.to_string();
                io_error = Some(e);
                Error::SiteSpec(msg)
            })
        });
        let base = match (base, io_error) {
            (_, Some(e)) => return Err(e),
            (b, None) => b?,
        };
        let extra = self.actions(m)?;
        if extra.is_empty() {
            return Ok((spec.to_string(), base));
        }
        let mut objects: Vec<(String, MAction)> =
            base.objects().iter().map(|o| (o.name.clone(), o.action.clone())).collect();
        objects.extend(extra);
        Ok((spec.to_string(), Site::new(m, objects)?))
    }
}

/// Runs a job and returns the text to print.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    if cli.out == Output::Dot && cli.command != Command::Corr {
        return Err(CliError::Usage("--out dot is only available for corr".into()));
    }
    let m = cli.monoid()?;
    let value = match cli.command {
        Command::Validate => report::validate(&m, &cli.actions(&m)?),
        Command::Subgroups => report::subgroups(&m),
        Command::Hopf => report::hopf(&m),
        Command::Inv => {
            let (spec, site) = cli.site(&m)?;
            let path = cli.hom.as_ref().ok_or_else(|| CliError::Usage("inv needs --hom".into()))?;
            let h = schema::parse_hom(path, &m)?;
            report::inv(&spec, &site, &h)?
        }
        Command::Stab => {
            let (spec, site) = cli.site(&m)?;
            let path = cli.sub.as_ref().ok_or_else(|| CliError::Usage("stab needs --sub".into()))?;
            let v = schema::parse_subfunctor(path, &site)?;
            report::stab(&spec, &site, &v, cli.max_families)?
        }
        Command::End => {
            let (spec, site) = cli.site(&m)?;
            let v = cli.sub.as_ref().map(|p| schema::parse_subfunctor(p, &site)).transpose()?;
            report::end(&spec, &site, v.as_ref(), cli.max_families)?
        }
        Command::Corr => {
            let (spec, site) = cli.site(&m)?;
            let c = galmon::galois::galois_correspondence(&m, &site)?;
            if cli.out == Output::Dot {
                return Ok(dot::correspondence(&c));
            }
            report::corr(&spec, &c)
        }
        Command::Coinduce => {
            let path = cli.hom.as_ref().ok_or_else(|| CliError::Usage("coinduce needs --hom".into()))?;
            let h = schema::parse_hom(path, &m)?;
            let [n_path] = cli.action.as_slice() else {
                return Err(CliError::Usage("coinduce needs exactly one --action over the hom's source".into()));
            };
            let n = schema::parse_action(n_path, h.src())?;
            report::coinduce(&h, &n)?
        }
        Command::Laws => {
            let (spec, site) = cli.site(&m)?;
            report::laws(&spec, &site, cli.seed)?
        }
    };
    let mut text = serde_json::to_string_pretty(&value).expect("reports serialize");
    text.push('\n');
    Ok(text)
}
