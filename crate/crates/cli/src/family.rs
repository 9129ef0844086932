use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use theta_lab::gens::{
    gen_balanced_hard, gen_blowup_even, gen_linear_kpartite, gen_partial_steiner, gen_random_bounded, round_parameters,
};
use theta_lab::{Error, Hypergraph, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    BalancedHard,
    Linear,
    Blowup,
    Steiner,
    Random,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::BalancedHard => "balanced-hard",
            Family::Linear => "linear",
            Family::Blowup => "blowup",
            Family::Steiner => "steiner",
            Family::Random => "random",
        }
    }
}

/// Builds a grid instance from `(n, d, k)`. With `round`, `n` is lowered to the
/// nearest size the family accepts. Blowups use a random 2-graph of maximum
/// degree `d` on `n / (k/2)` vertices as base.
pub fn grid_instance(family: Family, n: usize, d: usize, k: usize, seed: u64, round: bool) -> Result<Hypergraph> {
    let divisible = |unit: usize| -> Result<usize> {
        if unit == 0 || n < unit {
            return Err(Error::Input(format!("n = {n} is too small (unit {unit})")));
        }
        if n.is_multiple_of(unit) || round {
            Ok(n - n % unit)
        } else {
            Err(Error::Input(format!("n = {n} is not a multiple of {unit}")))
        }
    };
    match family {
        Family::BalancedHard => {
            let n = if round { round_parameters(n, d, k)?.0 } else { n };
            Ok(gen_balanced_hard(n, d, k, seed)?.hypergraph)
        }
        Family::Linear => {
            let n = divisible(k)?;
            Ok(gen_linear_kpartite(n / k, d, k, seed)?.hypergraph)
        }
        Family::Blowup => {
            if k < 2 || !k.is_multiple_of(2) {
                return Err(Error::Input(format!("blowup needs even k, got {k}")));
            }
            let ell = k / 2;
            let n = divisible(ell)?;
            let base = gen_random_bounded(n / ell, d, 2, seed)?;
            Ok(gen_blowup_even(&base, ell)?.hypergraph)
        }
        Family::Steiner => gen_partial_steiner(n, k, seed),
        Family::Random => gen_random_bounded(n, d, k, seed),
    }
}
