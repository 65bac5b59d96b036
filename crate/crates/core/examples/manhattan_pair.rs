//! Manhattan curve and rigidity constant for the standard basis of F₂
//! against S' = {a, b, ab}.

use std::sync::Arc;

use mls_core::census::{ball_counts, enumerate_conjugacy, enumerate_elements, growth_rate};
use mls_core::manhattan::{beta, check_bounds, dilation, sample_theta, uniform_grid};
use mls_core::metrics::{GeneratingSet, MetricHandle};
use mls_core::Word;

fn main() -> mls_core::Result<()> {
    let s = Arc::new(MetricHandle::<f64>::standard(2));
    let gens: Vec<Word> = ["a", "b", "ab"].iter().map(|x| Word::parse(x)).collect::<Result<_, _>>()?;
    let sp = Arc::new(MetricHandle::word(GeneratingSet::new(2, &gens)?));

    let v = growth_rate(&ball_counts::<f64>(&s, 40)?)?.rate;
    let v_star = growth_rate(&ball_counts::<f64>(&sp, 40)?)?.rate;
    println!("v = {v:.6}, v* = {v_star:.6}");

    let census = enumerate_elements(&s, 12.0)?.with_star(&sp)?;
    let curve = sample_theta(&census, &uniform_grid(0.0, v_star, 21), v, v_star)?;
    for (a, t) in curve.grid.iter().zip(&curve.theta) {
        println!("theta({a:.4}) = {t:.6}");
    }

    let d = dilation(&enumerate_conjugacy(&s, 12.0)?.with_star(&sp, 8)?)?;
    let r = beta(&curve)?.with_dilation(d);
    let check = check_bounds(&r, None);
    println!("beta = {:.6}, normalized = {:.6}, alpha_sym = {:.6}", r.beta, r.beta_bar, r.alpha_sym);
    println!("Delta >= {:.6}: beta check {:?}, alpha check {:?}", r.delta_thurston.unwrap_or(f64::NAN), check.beta_check, check.alpha_check);
    Ok(())
}
