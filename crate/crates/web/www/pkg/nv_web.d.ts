/* tslint:disable */
/* eslint-disable */

/**
 * Joinless, maximality and parse-tree report for a binary code.
 */
export function analyze_code(n: number, text: string): string;

/**
 * A code in the one-tuple-per-line form accepted by [`analyze_code`].
 */
export function code_lines(json_text: string): string;

/**
 * Circuit equivalence in `group`, `truthtable` or `jordan` mode.
 */
export function compare_circuits(a: string, b: string, mode: string): string;

/**
 * Evaluates a word over the built-in V registry, optionally embedded into 2V.
 */
export function evaluate_word(word: string, two_v: boolean): string;

/**
 * The contents of a named fixture, or an empty string.
 */
export function fixture(name: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly analyze_code: (a: number, b: number, c: number) => [number, number];
    readonly code_lines: (a: number, b: number) => [number, number];
    readonly compare_circuits: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
    readonly evaluate_word: (a: number, b: number, c: number) => [number, number];
    readonly fixture: (a: number, b: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
