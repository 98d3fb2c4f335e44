//! Machine-readable output records.

use braidhash::compiler::{CompileResult, HashParams};
use serde::Serialize;

pub const SCHEMA: &str = "braidhash/1";

#[derive(Serialize)]
pub struct ParamsOut {
    pub l: usize,
    pub m: usize,
    #[serde(rename = "L")]
    pub big_l: usize,
    pub n: usize,
    pub q: usize,
}

impl From<&HashParams> for ParamsOut {
    fn from(p: &HashParams) -> Self {
        ParamsOut {
            l: p.coarse_length,
            m: p.coarse_factors,
            big_l: p.fine_length,
            n: p.fine_factors,
            q: p.iterations,
        }
    }
}

#[derive(Serialize)]
pub struct StageOut {
    pub stage: String,
    pub distance: f64,
    pub length: usize,
    pub candidates: u64,
    pub improved: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

#[derive(Serialize)]
pub struct CompileOut {
    pub schema: &'static str,
    pub gate: String,
    pub word: String,
    pub distance: f64,
    pub nominal_length: usize,
    pub raw_length: usize,
    pub reduced_length: usize,
    pub params: ParamsOut,
    pub stages: Vec<StageOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

fn ms(d: std::time::Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

impl CompileOut {
    pub fn new(gate: &str, params: &HashParams, r: &CompileResult, timing: bool) -> Self {
        CompileOut {
            schema: SCHEMA,
            gate: gate.to_string(),
            word: r.approximation.word.to_string(),
            distance: r.approximation.dist,
            nominal_length: r.nominal_length,
            raw_length: r.raw_length(),
            reduced_length: r.reduced_length(),
            params: params.into(),
            stages: r
                .history
                .iter()
                .map(|h| StageOut {
                    stage: h.stage.to_string(),
                    distance: h.dist,
                    length: h.length,
                    candidates: h.candidates,
                    improved: h.improved,
                    wall_time_ms: timing.then(|| ms(h.wall_time)),
                })
                .collect(),
            wall_time_ms: timing.then(|| ms(r.total_wall_time())),
        }
    }

    pub fn text(&self) -> String {
        let mut s = format!(
            "gate      {}\nword      {}\ndistance  {:.6e}\nlength    nominal {} raw {} reduced {}\n",
            self.gate,
            self.word,
            self.distance,
            self.nominal_length,
            self.raw_length,
            self.reduced_length
        );
        for st in &self.stages {
            s.push_str(&format!(
                "  {:<13} d={:.6e} len={:<4} candidates={}{}{}\n",
                st.stage,
                st.distance,
                st.length,
                st.candidates,
                if st.improved { "" } else { " (kept)" },
                st.wall_time_ms
                    .map(|t| format!(" {t:.1} ms"))
                    .unwrap_or_default()
            ));
        }
        if let Some(t) = self.wall_time_ms {
            s.push_str(&format!("time      {t:.1} ms\n"));
        }
        s
    }

    pub fn csv(&self) -> String {
        let mut s = String::from("stage,distance,length,word\n");
        for st in &self.stages {
            s.push_str(&format!("{},{:.8e},{},\n", st.stage, st.distance, st.length));
        }
        s.push_str(&format!(
            "final,{:.8e},{},{}\n",
            self.distance, self.reduced_length, self.word
        ));
        s
    }
}

#[derive(Serialize)]
pub struct BruteOut {
    pub schema: &'static str,
    pub gate: String,
    pub max_length: usize,
    pub family: &'static str,
    pub word: String,
    pub length: usize,
    pub distance: f64,
    pub nodes_visited: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

#[derive(Serialize)]
pub struct TableOut {
    pub schema: &'static str,
    pub file: String,
    pub nominal_length: usize,
    pub metric: String,
    pub mean_error: f64,
    pub min_error: f64,
    pub max_error: f64,
    pub max_word_length: usize,
}

#[derive(Serialize)]
pub struct FitOut {
    pub schema: &'static str,
    pub count: usize,
    pub d_l: f64,
    pub ks_stat: f64,
}

#[derive(Serialize)]
pub struct SuiteOut {
    pub schema: &'static str,
    pub count: usize,
    pub seed: u64,
    pub params: ParamsOut,
    pub preprocessed_mean: f64,
    pub final_mean: f64,
    pub final_max: f64,
    pub d_l: Option<f64>,
    pub ks_stat: Option<f64>,
}

#[derive(Serialize)]
pub struct DecayOut {
    pub schema: &'static str,
    pub family: &'static str,
    pub count: usize,
    pub seed: u64,
    pub lengths: Vec<usize>,
    pub mean_distances: Vec<f64>,
    pub xi: f64,
}

pub fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serialises");
    s.push('\n');
    s
}
