/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_curve_free: (a: number, b: number) => void;
export const __wbg_plate_free: (a: number, b: number) => void;
export const curve_ceiling: (a: number) => number;
export const curve_linearStrain: (a: number) => [number, number];
export const curve_strain: (a: number) => [number, number];
export const curve_stress: (a: number) => [number, number];
export const plate_clampEvents: (a: number) => number;
export const plate_converged: (a: number) => number;
export const plate_displacement: (a: number) => [number, number];
export const plate_elements: (a: number) => [number, number];
export const plate_iterations: (a: number) => number;
export const plate_nodes: (a: number) => [number, number];
export const plate_openingJump: (a: number) => [number, number];
export const plate_openingX: (a: number) => [number, number];
export const plate_strainNorm: (a: number) => [number, number];
export const plate_stressNorm: (a: number) => [number, number];
export const plate_temperature: (a: number) => [number, number];
export const plate_tipNode: (a: number) => number;
export const responseCurve: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const solvePlate: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
