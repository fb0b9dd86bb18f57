// scratch probe for the cvol derivative
use lasermpc::mor::{build_rom, MorConfig};
use lasermpc::physical::{AbsorptionProfile, Geometry, MaterialConstants};

fn main() {
    let rom = build_rom(
        Geometry::default(), MaterialConstants::default(), AbsorptionProfile::default(),
        30, 80, &MorConfig::default(), 4e-3,
    ).unwrap();
    let model = &rom.model;
    let alpha = 0.5f64;
    let (_, dc) = model.eval_derivatives(alpha);
    for &h in &[1e-3, 1e-4, 1e-5, 1e-6, 1e-7] {
        let hh = h * alpha;
        let cp = model.eval_cvol(alpha + hh);
        let cm = model.eval_cvol(alpha - hh);
        let fd3 = (cp[3] - cm[3]) / (2.0 * hh);
        println!("h={h:.0e}: fd[3]={fd3:.12e}  dual[3]={:.12e}  rel={:.3e}", dc[3], ((dc[3]-fd3)/fd3).abs());
    }
    let c0 = model.eval_cvol(alpha);
    println!("c[3] value = {:.6e}", c0[3]);
}
