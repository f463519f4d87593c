/* tslint:disable */
/* eslint-disable */

/**
 * Random network: interior point at a loose gap, then CNET.
 */
export function mcf_demo(nodes: number, arcs: number, seed: bigint, gap: number): string;

/**
 * Random point clouds: Sinkhorn plan, then the vertex found by TNET.
 */
export function ot_demo(m: number, n: number, seed: bigint, eta?: number | null): string;

/**
 * Degenerate transport LP: the same interior point crossed over with several
 * perturbation seeds, each landing on a (possibly different) optimal vertex.
 */
export function perturb_demo(size: number, face_dim: number, seed: bigint, delta: number, trials: bigint): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly mcf_demo: (a: number, b: number, c: bigint, d: number) => [number, number, number, number];
    readonly ot_demo: (a: number, b: number, c: bigint, d: number, e: number) => [number, number, number, number];
    readonly perturb_demo: (a: number, b: number, c: bigint, d: number, e: bigint) => [number, number, number, number];
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
