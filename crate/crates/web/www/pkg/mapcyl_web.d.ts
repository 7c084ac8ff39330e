/* tslint:disable */
/* eslint-disable */

export function deviationGrid(fixture_name: string, a: string, b: string, n: number, coords: Float64Array): Float64Array;

/**
 * Dimension of `X` for a fixture.
 */
export function dimX(fixture_name: string): number;

/**
 * Names of the catalogued fixtures, as a JSON array.
 */
export function fixtures(): string;

/**
 * The square retraction `φ(u, v)` as `[u', v']`.
 */
export function phi(u: number, v: number): Float64Array;

/**
 * `Γ(p, k/(steps-1))` as a JSON array of `{s, point}`. A missing `t`
 * selects a base point.
 */
export function trajectory(fixture_name: string, which: string, coords: Float64Array, t: number | null | undefined, steps: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly deviationGrid: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number, number, number];
    readonly dimX: (a: number, b: number) => [number, number, number];
    readonly fixtures: () => [number, number];
    readonly phi: (a: number, b: number) => [number, number];
    readonly trajectory: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number, number, number];
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
