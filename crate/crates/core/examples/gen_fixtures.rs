//! Regenerates the bundled system fixtures under fixtures/.
//!
//! Usage: cargo run -p conformal-lab --example gen_fixtures [DIR]

use conformal_lab::config::{emit_config, to_config};
use conformal_lab::gdms::systems;
use conformal_lab::gdms::GDMSystem;
use conformal_lab::maps::{ConformalMap, Similarity};
use conformal_lab::region::Region;

fn main() {
    let dir = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "fixtures".to_string());
    std::fs::create_dir_all(&dir).expect("create fixtures dir");
    let write = |name: &str, text: String| {
        let path = format!("{dir}/{name}");
        std::fs::write(&path, text).expect("write fixture");
        println!("wrote {path}");
    };

    write("cantor.json", emit_config(&to_config(&systems::cantor_thirds())));
    write(
        "gauss12.json",
        emit_config(&to_config(&systems::gauss_ifs(&[1, 2]).unwrap())),
    );

    // digit sets {1}, {1,2}, …, {1..6} as a filtration of one system
    let gauss6 = systems::gauss_ifs(&[1, 2, 3, 4, 5, 6]).unwrap();
    let mut cfg = to_config(&gauss6);
    cfg.filtration = Some(
        (1..=6)
            .map(|k| (1..=k).map(|j| format!("g{j}")).collect())
            .collect(),
    );
    write("gauss16.json", emit_config(&cfg));

    write(
        "sierpinski.json",
        emit_config(&to_config(&systems::sierpinski())),
    );
    write(
        "decimal_cantor.json",
        emit_config(&to_config(&systems::decimal_cantor())),
    );

    // two half-scale maps with overlapping images: a valid system whose
    // open-set-condition evidence fails at depth 1
    let overlap = GDMSystem::ifs(
        Region::interval(0.0, 1.0),
        vec![
            (
                "h0".into(),
                ConformalMap::Similarity(Similarity::line(0.5, false, 0.0)),
            ),
            (
                "h1".into(),
                ConformalMap::Similarity(Similarity::line(0.5, false, 0.25)),
            ),
        ],
    )
    .unwrap();
    write("overlap.json", emit_config(&to_config(&overlap)));
}
