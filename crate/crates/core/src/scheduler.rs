//! As-soon-as-possible scheduling and the depth / concurrency metrics
//! derived from it. Every gate costs one timestep; gates conflict only when
//! they share an operand.

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::circuit::Circuit;

/// Gate indices grouped by timestep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub timesteps: Vec<Vec<usize>>,
    pub source_width: usize,
}

impl Schedule {
    pub fn depth(&self) -> usize {
        self.timesteps.len()
    }

    /// Timestep index of every gate.
    pub fn placement(&self, gate_count: usize) -> Vec<usize> {
        let mut at = vec![usize::MAX; gate_count];
        for (t, step) in self.timesteps.iter().enumerate() {
            for &g in step {
                at[g] = t;
            }
        }
        at
    }
}

/// Places each gate one step after the latest earlier gate sharing a qubit.
pub fn asap_schedule(c: &Circuit) -> Schedule {
    // ready[q]: first free timestep on qubit q
    let mut ready = vec![0usize; c.width()];
    let mut timesteps: Vec<Vec<usize>> = Vec::new();
    for (i, g) in c.gates().iter().enumerate() {
        let t = g
            .operands()
            .iter()
            .map(|q| ready[q.index()])
            .max()
            .unwrap_or(0);
        for q in g.operands() {
            ready[q.index()] = t + 1;
        }
        if t == timesteps.len() {
            timesteps.push(Vec::new());
        }
        timesteps[t].push(i);
    }
    Schedule {
        timesteps,
        source_width: c.width(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Metrics {
    pub depth: usize,
    pub total_gates: usize,
    pub width: usize,
    pub max_concurrency: usize,
    /// `total_gates / depth`, zero for an empty circuit.
    #[serde(serialize_with = "ratio_as_f64")]
    pub mean_concurrency: Ratio<u64>,
}

fn ratio_as_f64<S: Serializer>(r: &Ratio<u64>, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(*r.numer() as f64 / *r.denom() as f64)
}

impl Metrics {
    pub fn from_schedule(c: &Circuit, schedule: &Schedule) -> Metrics {
        let depth = schedule.depth();
        let total = c.len();
        let mean = if depth == 0 {
            Ratio::from_integer(0)
        } else {
            Ratio::new(total as u64, depth as u64)
        };
        Metrics {
            depth,
            total_gates: total,
            width: c.width(),
            max_concurrency: schedule.timesteps.iter().map(Vec::len).max().unwrap_or(0),
            mean_concurrency: mean,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("metrics serialization is infallible")
    }
}

pub fn metrics(c: &Circuit) -> Metrics {
    Metrics::from_schedule(c, &asap_schedule(c))
}

/// Depth alone, without materialising the schedule.
pub fn depth(c: &Circuit) -> usize {
    let mut ready = vec![0usize; c.width()];
    let mut depth = 0;
    for g in c.gates() {
        let t = g
            .operands()
            .iter()
            .map(|q| ready[q.index()])
            .max()
            .unwrap_or(0)
            + 1;
        for q in g.operands() {
            ready[q.index()] = t;
        }
        depth = depth.max(t);
    }
    depth
}
