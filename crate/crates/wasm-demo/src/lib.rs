//! WebAssembly bindings for the cracked-plate demo page in `www/`.

pub mod view;

use wasm_bindgen::prelude::*;

/// Strain response to uniaxial stress, with the linear response for comparison.
#[wasm_bindgen]
pub struct Curve(view::ResponseCurve);

#[wasm_bindgen]
impl Curve {
    #[wasm_bindgen(getter)]
    pub fn stress(&self) -> Vec<f64> {
        self.0.stress.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn strain(&self) -> Vec<f64> {
        self.0.strain.clone()
    }

    #[wasm_bindgen(getter, js_name = linearStrain)]
    pub fn linear_strain(&self) -> Vec<f64> {
        self.0.linear_strain.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn ceiling(&self) -> f64 {
        self.0.ceiling
    }
}

#[wasm_bindgen(js_name = responseCurve)]
pub fn response_curve(
    a: f64,
    b: f64,
    fiber_angle: f64,
    along_fiber: bool,
    max_stress: f64,
    samples: usize,
) -> Result<Curve, JsError> {
    view::response_curve(a, b, fiber_angle, along_fiber, max_stress, samples)
        .map(Curve)
        .map_err(|e| JsError::new(&e))
}

/// Solved plate: mesh, nodal fields and the crack opening profile.
#[wasm_bindgen]
pub struct Plate(view::PlateView);

#[wasm_bindgen]
impl Plate {
    #[wasm_bindgen(getter)]
    pub fn nodes(&self) -> Vec<f64> {
        self.0.nodes.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn elements(&self) -> Vec<u32> {
        self.0.elements.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn displacement(&self) -> Vec<f64> {
        self.0.displacement.clone()
    }

    #[wasm_bindgen(getter, js_name = stressNorm)]
    pub fn stress_norm(&self) -> Vec<f64> {
        self.0.stress_norm.clone()
    }

    #[wasm_bindgen(getter, js_name = strainNorm)]
    pub fn strain_norm(&self) -> Vec<f64> {
        self.0.strain_norm.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn temperature(&self) -> Vec<f64> {
        self.0.temperature.clone()
    }

    #[wasm_bindgen(getter, js_name = openingX)]
    pub fn opening_x(&self) -> Vec<f64> {
        self.0.opening_x.clone()
    }

    #[wasm_bindgen(getter, js_name = openingJump)]
    pub fn opening_jump(&self) -> Vec<f64> {
        self.0.opening_jump.clone()
    }

    #[wasm_bindgen(getter, js_name = tipNode)]
    pub fn tip_node(&self) -> u32 {
        self.0.tip_node
    }

    #[wasm_bindgen(getter)]
    pub fn iterations(&self) -> usize {
        self.0.iterations
    }

    #[wasm_bindgen(getter)]
    pub fn converged(&self) -> bool {
        self.0.converged
    }

    #[wasm_bindgen(getter, js_name = clampEvents)]
    pub fn clamp_events(&self) -> usize {
        self.0.clamp_events
    }
}

#[wasm_bindgen(js_name = solvePlate)]
pub fn solve_plate(
    cells: usize,
    order: usize,
    a: f64,
    b: f64,
    fiber_angle: f64,
    parabolic: bool,
    top_uy: f64,
) -> Result<Plate, JsError> {
    let input = view::PlateInput {
        cells,
        order,
        a,
        b,
        fiber_angle,
        parabolic,
        top_uy,
    };
    view::solve_plate(&input)
        .map(Plate)
        .map_err(|e| JsError::new(&e))
}
