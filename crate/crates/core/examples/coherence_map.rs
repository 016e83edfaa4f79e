//! Stable coherence over (psi, Delta) and where it peaks, for a weak and a
//! moderate drive. Writes the grid to the CSV path given as first argument.

use nvqb::output::write_field_csv;
use nvqb::reproduce::fig4_map;
use nvqb::TWO_PI;

fn main() -> nvqb::Result<()> {
    for omega_mhz in [0.05, 0.5] {
        let field = fig4_map(omega_mhz)?;
        let k = field.argmax();
        let c = field.coordinates(k);
        println!(
            "Omega/2pi = {omega_mhz} MHz: max C = {:.4} bits at psi = {:.3}, Delta/2pi = {:.3} MHz ({} audit points agree)",
            field.values[k],
            c[0],
            c[1] / TWO_PI,
            field.audit.len()
        );
        if let Some(path) = std::env::args().nth(1) {
            let path = format!("{path}.{omega_mhz}.csv");
            write_field_csv(std::fs::File::create(&path)?, &field)?;
            println!("  wrote {path}");
        }
    }
    Ok(())
}
