/* tslint:disable */
/* eslint-disable */

/**
 * Stability audit rows for each comma-separated ε.
 */
export function audit_sweep(group: string, sigma: string, m: number, epsilons: string, seed: number): string;

/**
 * Sup norm, residual and distance to the closed-form family per radius.
 */
export function dichotomy_curve(ball: string, radii: string, equation: string, sigma: string, candidate: string): string;

/**
 * Number of multiplicative functions on a catalog group, including zero,
 * for filling the page's menus.
 */
export function multiplicative_count(group: string): number;

/**
 * `|f(xy) + χ(y)f(σ(y)x) - 2f(x)g(y)|` for a perturbed exact pair, as a
 * JSON object `{labels, cells, delta}`.
 */
export function residual_heatmap(group: string, sigma: string, m: number, epsilon: number, seed: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly audit_sweep: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
    readonly dichotomy_curve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number) => [number, number, number, number];
    readonly multiplicative_count: (a: number, b: number) => [number, number, number];
    readonly residual_heatmap: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
