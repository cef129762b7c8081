/* tslint:disable */
/* eslint-disable */

/**
 * `[x0, phi(x0), x1, phi(x1), ...]` on `[0, 2]`, then `[t0, |phi_hat(sigma + i t0)|, ...]` on `[t_min, t_max]`.
 */
export function cutoff_and_mellin(sigma: number, t_min: number, t_max: number, n: number): Float64Array;

/**
 * Rows `[t, re H, im H, re P_y, im P_y]` along `sigma + i t`, where `P_y` is the Dirichlet polynomial of length `y`.
 */
export function hm_vs_polynomial(m: number, sigma: number, t0: number, t1: number, n: number, y: number): Float64Array;

/**
 * `[re, im, ...]` of `n` random-model samples of `H_m(s)` for zeta.
 */
export function random_cloud(m: number, re: number, im: number, n: number, seed: bigint, prime_bound: bigint): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly cutoff_and_mellin: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly hm_vs_polynomial: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly random_cloud: (a: number, b: number, c: number, d: number, e: bigint, f: bigint) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
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
