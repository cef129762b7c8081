/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const cutoff_and_mellin: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const hm_vs_polynomial: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
export const random_cloud: (a: number, b: number, c: number, d: number, e: bigint, f: bigint) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
