//! `ising optimize` and `ising thermo`.

use qgames_core::ising::{
    log_returns, potential_ground_states, thermodynamics, BitStrategy, LogReturns, MarketError,
    MarketParams, PriceSeries,
};

use crate::report::Report;
use crate::series::{parse_series, Series, SeriesKind};
use crate::CliError;

/// Where the chain's log returns come from.
#[derive(Debug, Clone, Copy)]
pub enum Source<'a> {
    Prices(&'a [u8]),
    Returns(&'a [u8]),
}

fn market_error(e: MarketError) -> CliError {
    match e {
        MarketError::EnumerationCap { .. } => CliError::ResourceCap(e.to_string()),
        _ => CliError::Input(e.to_string()),
    }
}

struct Chain {
    returns: LogReturns,
    timestamps: Option<Vec<String>>,
}

fn load(source: Source<'_>) -> Result<Chain, CliError> {
    let (series, returns) = match source {
        Source::Prices(bytes) => {
            let series = parse_series(bytes, SeriesKind::Prices)?;
            let prices = PriceSeries::new(series.values.clone()).map_err(market_error)?;
            (series, log_returns(&prices))
        }
        Source::Returns(bytes) => {
            let series = parse_series(bytes, SeriesKind::Returns)?;
            let returns = LogReturns::new(series.values.clone()).map_err(market_error)?;
            (series, returns)
        }
    };
    let Series { timestamps, .. } = series;
    Ok(Chain {
        returns,
        timestamps,
    })
}

fn header(command: &str, chain: &Chain, source: Source<'_>) -> Report {
    let mut r = Report::for_command(command)
        .with(
            "input",
            match source {
                Source::Prices(_) => "prices",
                Source::Returns(_) => "returns",
            },
        )
        .with("k", chain.returns.len());
    if let Some(ts) = &chain.timestamps {
        r.push("timestamps", ts.clone());
    }
    r
}

fn strings(strategies: &[BitStrategy]) -> Vec<String> {
    strategies.iter().map(ToString::to_string).collect()
}

pub fn optimize(source: Source<'_>, j: f64, eps: f64) -> Result<Report, CliError> {
    let chain = load(source)?;
    let g = qgames_core::ising::ground_state(&chain.returns, j).map_err(market_error)?;
    let report = potential_ground_states(&chain.returns, j, eps).map_err(market_error)?;
    Ok(header("ising optimize", &chain, source)
        .with("j", j)
        .with("eps", eps)
        .with("energy", report.energy)
        .with("strategy", g.strategy.to_string())
        .with("ground_states", strings(&report.ground_states))
        .with(
            "potential_strategies",
            strings(&report.potential_ground_states),
        )
        .with("potential_count", report.potential_ground_states.len())
        .with("coherence_depth", report.coherence_depth)
        .with("endpoint_energies", report.endpoint_energies.to_vec())
        .with(
            "viable_endpoints",
            report
                .viable_endpoints
                .iter()
                .map(|&b| usize::from(b))
                .collect::<Vec<_>>(),
        ))
}

pub fn thermo(source: Source<'_>, j: f64, beta: f64) -> Result<Report, CliError> {
    let chain = load(source)?;
    let params = MarketParams::new(j, beta).map_err(market_error)?;
    let t = thermodynamics(&chain.returns, params);
    Ok(header("ising thermo", &chain, source)
        .with("j", j)
        .with("beta", beta)
        .with("log_partition", t.log_partition)
        .with("free_energy", t.free_energy)
        .with("mean_energy", t.mean_energy)
        .with("occupations", t.occupations))
}
