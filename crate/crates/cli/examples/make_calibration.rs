//! Regenerates the synthetic calibration inputs under data/calibration/.
//!
//! The demand profile is the evening-peak synthesizer at a 150 Gbps peak per
//! group; the solar profile is the built-in half-sine. Both are frozen as
//! CSV so study results stay byte-reproducible; rerun this only when the
//! calibration deliberately changes.

use greenvod_cli::formats;
use greenvod_core::demand::{synth_demand, DemandShape};
use greenvod_core::SolarProfile;

fn main() {
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let topo_text = std::fs::read_to_string(root.join("nsfnet14.topo")).unwrap();
    let topo = formats::parse_topology(&topo_text).unwrap();

    let demand = synth_demand(150.0, DemandShape::EveningPeak, &topo).unwrap();
    let out = root.join("calibration");
    std::fs::create_dir_all(&out).unwrap();
    std::fs::write(out.join("demand.csv"), formats::emit_demand(&demand)).unwrap();
    std::fs::write(
        out.join("solar.csv"),
        formats::emit_solar(&SolarProfile::default_half_sine()),
    )
    .unwrap();
    println!("wrote {}", out.display());
}
