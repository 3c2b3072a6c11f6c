/* tslint:disable */
/* eslint-disable */

/**
 * Strain response to uniaxial stress, with the linear response for comparison.
 */
export class Curve {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly ceiling: number;
    readonly linearStrain: Float64Array;
    readonly strain: Float64Array;
    readonly stress: Float64Array;
}

/**
 * Solved plate: mesh, nodal fields and the crack opening profile.
 */
export class Plate {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly clampEvents: number;
    readonly converged: boolean;
    readonly displacement: Float64Array;
    readonly elements: Uint32Array;
    readonly iterations: number;
    readonly nodes: Float64Array;
    readonly openingJump: Float64Array;
    readonly openingX: Float64Array;
    readonly strainNorm: Float64Array;
    readonly stressNorm: Float64Array;
    readonly temperature: Float64Array;
    readonly tipNode: number;
}

export function responseCurve(a: number, b: number, fiber_angle: number, along_fiber: boolean, max_stress: number, samples: number): Curve;

export function solvePlate(cells: number, order: number, a: number, b: number, fiber_angle: number, parabolic: boolean, top_uy: number): Plate;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_curve_free: (a: number, b: number) => void;
    readonly __wbg_plate_free: (a: number, b: number) => void;
    readonly curve_ceiling: (a: number) => number;
    readonly curve_linearStrain: (a: number) => [number, number];
    readonly curve_strain: (a: number) => [number, number];
    readonly curve_stress: (a: number) => [number, number];
    readonly plate_clampEvents: (a: number) => number;
    readonly plate_converged: (a: number) => number;
    readonly plate_displacement: (a: number) => [number, number];
    readonly plate_elements: (a: number) => [number, number];
    readonly plate_iterations: (a: number) => number;
    readonly plate_nodes: (a: number) => [number, number];
    readonly plate_openingJump: (a: number) => [number, number];
    readonly plate_openingX: (a: number) => [number, number];
    readonly plate_strainNorm: (a: number) => [number, number];
    readonly plate_stressNorm: (a: number) => [number, number];
    readonly plate_temperature: (a: number) => [number, number];
    readonly plate_tipNode: (a: number) => number;
    readonly responseCurve: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly solvePlate: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
