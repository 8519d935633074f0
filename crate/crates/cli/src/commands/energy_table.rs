//! `onn energy-table`: per-operation cost estimates as an aligned text
//! table and a CSV file.

use onn_core::energy::{
    energy_per_inference, format_energy, parse_scenario, preset_sec2d, preset_table1, Scenario,
    Technology,
};
use onn_core::{Error, Result};

use crate::csvio::{CsvFile, CsvValue};
use crate::manifest::Manifest;

use super::EnergyTableArgs;

pub fn run(args: EnergyTableArgs) -> Result<()> {
    let (scenarios, restrict, label, sig_figs) = match (&args.preset, &args.scenario) {
        (Some(preset), None) => match preset.as_str() {
            // Published precision: the comparison table rounds to one
            // significant figure; the worked example quotes two.
            "table1" => (preset_table1(), None, "table1".to_string(), 1),
            "sec2d" => (vec![preset_sec2d()], None, "sec2d".to_string(), 2),
            other => {
                return Err(Error::Config(format!(
                    "unknown preset {other:?}; available presets: table1, sec2d"
                )))
            }
        },
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::io(path.display().to_string(), e))?;
            let (scenario, tech) = parse_scenario(&text)?;
            (vec![scenario], tech, "custom".to_string(), 3)
        }
        (None, None) => {
            return Err(Error::Config(
                "provide --preset (table1, sec2d) or --scenario FILE".into(),
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    let technologies: Vec<Technology> = match restrict {
        Some(t) => vec![t],
        None => Technology::ALL.to_vec(),
    };

    let mut manifest = Manifest::start("energy-table");
    manifest.config("preset", &label);

    let csv_path = args.out_dir.join(format!("energy_{label}.csv"));
    let mut csv = CsvFile::create(
        &csv_path,
        &[
            "scenario",
            "technology",
            "energy_per_op_j",
            "energy_per_inference_j",
            "ops_per_inference",
            "neuron_compute_j",
            "input_memory_j",
            "acquisition_j",
        ],
    )?;

    // Aligned table: one row per technology, one column per scenario.
    let mut lines: Vec<String> = Vec::new();
    let mut header = format!("{:<16}", "per-op cost");
    for s in &scenarios {
        header.push_str(&format!("{:<18}", s.name));
    }
    lines.push(header);

    for tech in &technologies {
        let mut line = format!("{:<16}", tech.to_string());
        for s in &scenarios {
            let b = energy_per_inference(&s.shape, &s.costs, *tech)?;
            line.push_str(&format!("{:<18}", format_energy(b.energy_per_op, sig_figs)));
            csv.row(&[
                CsvValue::Text(s.name.clone()),
                CsvValue::Text(tech.to_string()),
                CsvValue::Float(b.energy_per_op),
                CsvValue::Float(b.energy_per_inference),
                CsvValue::Float(b.ops_per_inference),
                CsvValue::Float(b.neuron_compute),
                CsvValue::Float(b.input_memory),
                CsvValue::Float(b.acquisition),
            ])?;
        }
        lines.push(line);
    }
    let csv_path = csv.finish()?;

    for s in &scenarios {
        println!(
            "scenario {}: N_in+N_out = {}, N_hidden = {}, fan_in = {}, reuse = {}",
            s.name,
            s.shape.n_input + s.shape.n_output,
            s.shape.n_hidden,
            s.shape.fan_in,
            s.costs.reuse_m
        );
    }
    println!();
    for line in &lines {
        println!("{}", line.trim_end());
    }
    println!("\nwrote {}", csv_path.display());

    manifest.file(&csv_path);
    manifest.write(&args.out_dir)?;
    Ok(())
}
