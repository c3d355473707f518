//! Flat key=value run configuration.
//!
//! Every command consumes the same model keys (N, p, a1, a2, m, tau)
//! plus command-specific options; any key can come from a config file
//! (`--config run.cfg`) and be overridden by the matching CLI flag.
//! The effective configuration is echoed into the output directory so
//! a run is reproducible from its artifacts alone.

use bubble_tower::error::Error;
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub n_dim: usize,
    pub p: f64,
    pub a1: f64,
    pub a2: f64,
    pub m: f64,
    pub tau: f64,
    pub seed: u64,
    pub outdir: String,
    pub tol: f64,
    pub r_max: Option<f64>,
    pub spacing: Option<f64>,
    pub k: usize,
    pub k_list: Vec<usize>,
    pub lk_list: Vec<usize>,
    pub levels: Vec<usize>,
    pub separations: Vec<f64>,
    pub ell_max: usize,
    pub offset: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n_dim: 3,
            p: 3.0,
            a1: 1.0,
            a2: 0.0,
            m: 5.0,
            tau: 0.1,
            seed: 0,
            outdir: "out".into(),
            tol: 1e-12,
            r_max: None,
            spacing: None,
            k: 1000,
            k_list: vec![1000, 10_000, 100_000, 1_000_000],
            lk_list: vec![8, 16, 32, 64],
            levels: vec![32, 64, 128],
            separations: vec![4.0, 6.0, 8.0, 10.0],
            ell_max: 4,
            offset: 0.0,
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, Error> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse {key} = {value:?}")))
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>, Error> {
    value
        .split(',')
        .map(|v| parse(key, v))
        .collect()
}

impl RunConfig {
    pub fn apply(&mut self, key: &str, value: &str) -> Result<(), Error> {
        match key {
            "N" => self.n_dim = parse(key, value)?,
            "p" => self.p = parse(key, value)?,
            "a1" => self.a1 = parse(key, value)?,
            "a2" => self.a2 = parse(key, value)?,
            "m" => self.m = parse(key, value)?,
            "tau" => self.tau = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "outdir" => self.outdir = value.trim().to_string(),
            "tol" => self.tol = parse(key, value)?,
            "r_max" => self.r_max = Some(parse(key, value)?),
            "spacing" => self.spacing = Some(parse(key, value)?),
            "k" => self.k = parse(key, value)?,
            "k_list" => self.k_list = parse_list(key, value)?,
            "lk_list" => self.lk_list = parse_list(key, value)?,
            "levels" => self.levels = parse_list(key, value)?,
            "separations" => self.separations = parse_list(key, value)?,
            "ell_max" => self.ell_max = parse(key, value)?,
            "offset" => self.offset = parse(key, value)?,
            _ => return Err(Error::Config(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    pub fn load_file(&mut self, path: &Path) -> Result<(), Error> {
        let text = std::fs::read_to_string(path)?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!(
                    "{}:{}: expected key=value, got {line:?}",
                    path.display(),
                    lineno + 1
                )));
            };
            self.apply(key.trim(), value)?;
        }
        Ok(())
    }

    pub fn model_params(&self) -> Result<bubble_tower::model::ModelParams, Error> {
        bubble_tower::model::ModelParams::new(self.n_dim, self.p, self.a1, self.a2, self.m, self.tau)
    }

    /// Key=value echo of the effective configuration (sorted keys).
    pub fn echo(&self) -> String {
        let mut map: BTreeMap<&str, String> = BTreeMap::new();
        map.insert("N", self.n_dim.to_string());
        map.insert("p", format!("{:.16e}", self.p));
        map.insert("a1", format!("{:.16e}", self.a1));
        map.insert("a2", format!("{:.16e}", self.a2));
        map.insert("m", format!("{:.16e}", self.m));
        map.insert("tau", format!("{:.16e}", self.tau));
        map.insert("seed", self.seed.to_string());
        map.insert("tol", format!("{:.16e}", self.tol));
        map.insert("k", self.k.to_string());
        map.insert(
            "k_list",
            self.k_list.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","),
        );
        map.insert(
            "lk_list",
            self.lk_list.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","),
        );
        map.insert(
            "levels",
            self.levels.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","),
        );
        map.insert(
            "separations",
            self.separations.iter().map(|d| format!("{d:.16e}")).collect::<Vec<_>>().join(","),
        );
        map.insert("ell_max", self.ell_max.to_string());
        map.insert("offset", format!("{:.16e}", self.offset));
        let mut out = String::new();
        for (k, v) in map {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out
    }
}
