//! Nelder-Mead simplex minimizer used to refine gate angles.

/// Result of a minimization: best point, its cost and iterations used.
#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub point: Vec<f64>,
    pub cost: f64,
    pub iterations: usize,
}

/// Minimizes `cost` starting from `initial`, with the initial simplex spanned
/// by `step` along each coordinate. Stops after `max_iters` iterations or when
/// the spread of costs across the simplex falls below `1e-12`.
pub fn nelder_mead<F>(initial: &[f64], step: f64, max_iters: usize, mut cost: F) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    const REFLECT: f64 = 1.0;
    const EXPAND: f64 = 2.0;
    const CONTRACT: f64 = 0.5;
    const SHRINK: f64 = 0.5;

    let n = initial.len();
    if n == 0 {
        let c = cost(initial);
        return Minimum { point: Vec::new(), cost: c, iterations: 0 };
    }

    let mut vertices: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    vertices.push(initial.to_vec());
    for i in 0..n {
        let mut v = initial.to_vec();
        v[i] += step;
        vertices.push(v);
    }
    let mut costs: Vec<f64> = vertices.iter().map(|v| cost(v)).collect();

    let mut iterations = 0;
    while iterations < max_iters {
        iterations += 1;
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| costs[a].total_cmp(&costs[b]));
        let (best, worst, second_worst) = (order[0], order[n], order[n - 1]);
        if costs[worst] - costs[best] < 1e-12 {
            break;
        }

        let mut centroid = vec![0.0; n];
        for &idx in &order[..n] {
            for (c, x) in centroid.iter_mut().zip(&vertices[idx]) {
                *c += x / n as f64;
            }
        }
        let toward = |from: &[f64], coeff: f64| -> Vec<f64> {
            centroid.iter().zip(from).map(|(c, x)| c + coeff * (c - x)).collect()
        };

        let reflected = toward(&vertices[worst], REFLECT);
        let reflected_cost = cost(&reflected);
        if reflected_cost < costs[best] {
            let expanded = toward(&vertices[worst], REFLECT * EXPAND);
            let expanded_cost = cost(&expanded);
            if expanded_cost < reflected_cost {
                vertices[worst] = expanded;
                costs[worst] = expanded_cost;
            } else {
                vertices[worst] = reflected;
                costs[worst] = reflected_cost;
            }
            continue;
        }
        if reflected_cost < costs[second_worst] {
            vertices[worst] = reflected;
            costs[worst] = reflected_cost;
            continue;
        }

        let contracted = toward(&vertices[worst], -CONTRACT);
        let contracted_cost = cost(&contracted);
        if contracted_cost < costs[worst] {
            vertices[worst] = contracted;
            costs[worst] = contracted_cost;
            continue;
        }

        let anchor = vertices[best].clone();
        for i in 0..=n {
            if i == best {
                continue;
            }
            for (x, a) in vertices[i].iter_mut().zip(&anchor) {
                *x = a + SHRINK * (*x - a);
            }
            costs[i] = cost(&vertices[i]);
        }
    }

    let best = (0..=n).min_by(|&a, &b| costs[a].total_cmp(&costs[b])).unwrap_or(0);
    Minimum { point: vertices.swap_remove(best), cost: costs[best], iterations }
}
