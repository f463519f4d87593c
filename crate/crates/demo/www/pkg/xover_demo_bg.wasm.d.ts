/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const mcf_demo: (a: number, b: number, c: bigint, d: number) => [number, number, number, number];
export const ot_demo: (a: number, b: number, c: bigint, d: number, e: number) => [number, number, number, number];
export const perturb_demo: (a: number, b: number, c: bigint, d: number, e: bigint) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
