/* tslint:disable */
/* eslint-disable */

export class Reading {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    dd: number;
    kelvin: number;
    /**
     * Smallest resolvable |δd| for this pair and line.
     */
    limit: number;
    microstrain: number;
    resolvable: boolean;
}

export class SpectrumView {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    detuning(): Float64Array;
    /**
     * Refined dip centers.
     */
    dips(): Float64Array;
    /**
     * Refined peak centers.
     */
    peaks(): Float64Array;
    reflectivity(): Float64Array;
    transmissivity(): Float64Array;
}

/**
 * Separation change, strain and temperature behind a shift of the
 * super- or subradiant line.
 */
export function readShift(baseline: number, gamma_wg: number, gamma_free: number, superradiant: boolean, shift: number): Reading;

/**
 * Spectrum of `count` identical emitters spaced `separation` wavelengths
 * apart, sampled at `points` detunings in `[min, max]`.
 */
export function reflectionSpectrum(count: number, separation: number, gamma_wg: number, gamma_free: number, min: number, max: number, points: number): SpectrumView;

/**
 * Separation of two lossless emitters from their reflection dip, on
 * half-wavelength branch `branch`.
 */
export function separationFromDip(dip: number, gamma_wg: number, branch: number): number;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_get_reading_dd: (a: number) => number;
    readonly __wbg_get_reading_kelvin: (a: number) => number;
    readonly __wbg_get_reading_limit: (a: number) => number;
    readonly __wbg_get_reading_microstrain: (a: number) => number;
    readonly __wbg_get_reading_resolvable: (a: number) => number;
    readonly __wbg_reading_free: (a: number, b: number) => void;
    readonly __wbg_set_reading_dd: (a: number, b: number) => void;
    readonly __wbg_set_reading_kelvin: (a: number, b: number) => void;
    readonly __wbg_set_reading_limit: (a: number, b: number) => void;
    readonly __wbg_set_reading_microstrain: (a: number, b: number) => void;
    readonly __wbg_set_reading_resolvable: (a: number, b: number) => void;
    readonly __wbg_spectrumview_free: (a: number, b: number) => void;
    readonly readShift: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly reflectionSpectrum: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
    readonly separationFromDip: (a: number, b: number, c: number) => [number, number, number];
    readonly spectrumview_detuning: (a: number) => [number, number];
    readonly spectrumview_dips: (a: number) => [number, number];
    readonly spectrumview_peaks: (a: number) => [number, number];
    readonly spectrumview_reflectivity: (a: number) => [number, number];
    readonly spectrumview_transmissivity: (a: number) => [number, number];
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
