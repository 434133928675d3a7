//! Watch one pheromone deposit diffuse and evaporate.
//!
//! A single 40,000-unit release is placed at the center of an empty field,
//! then the field is stepped with the default diffusion and evaporation
//! rates. Every few ticks the example prints an ASCII rendering of the
//! plume (log-scaled) together with the total mass and the radius of the
//! region still above the tracking threshold.
//!
//! Run: cargo run --example pheromone_plume

use stigflock::{FieldParams, PheromoneField, SimParams};

fn main() {
    let params = SimParams::default();
    let field_params = FieldParams::from_sim(&params);
    let n = 41;
    let center = (n / 2, n / 2);
    let mut field = PheromoneField::new(n, n);
    field.deposit(center, params.stig_intensity).unwrap();

    println!(
        "release {} at {:?}; diffusion {}, retention {}\n",
        params.stig_intensity, center, field_params.diffusion_rate, field_params.evaporation_factor
    );
    for tick in 0..=60u32 {
        if tick % 15 == 0 {
            render(&field, params.peak_threshold);
            let above = (0..n)
                .flat_map(|x| (0..n).map(move |y| (x, y)))
                .filter(|&c| field.intensity(c) > params.peak_threshold)
                .count();
            println!(
                "tick {tick:2}: total mass {:>9.1}, {above} cells above tracking threshold\n",
                field.total_mass()
            );
        }
        field.step(&field_params);
    }
}

/// Log-scale glyph ramp: ' ' below threshold, then . : + * # by decade.
fn render(field: &PheromoneField, threshold: f64) {
    for y in 0..field.height() {
        let row: String = (0..field.width())
            .map(|x| {
                let v = field.intensity((x, y));
                if v <= threshold {
                    ' '
                } else {
                    [' ', '.', ':', '+', '*', '#'][(v.log10().floor() as usize + 1).min(5)]
                }
            })
            .collect();
        println!("|{row}|");
    }
}
