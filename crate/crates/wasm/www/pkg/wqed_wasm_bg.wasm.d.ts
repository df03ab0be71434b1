/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_get_reading_dd: (a: number) => number;
export const __wbg_get_reading_kelvin: (a: number) => number;
export const __wbg_get_reading_limit: (a: number) => number;
export const __wbg_get_reading_microstrain: (a: number) => number;
export const __wbg_get_reading_resolvable: (a: number) => number;
export const __wbg_reading_free: (a: number, b: number) => void;
export const __wbg_set_reading_dd: (a: number, b: number) => void;
export const __wbg_set_reading_kelvin: (a: number, b: number) => void;
export const __wbg_set_reading_limit: (a: number, b: number) => void;
export const __wbg_set_reading_microstrain: (a: number, b: number) => void;
export const __wbg_set_reading_resolvable: (a: number, b: number) => void;
export const __wbg_spectrumview_free: (a: number, b: number) => void;
export const readShift: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const reflectionSpectrum: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
export const separationFromDip: (a: number, b: number, c: number) => [number, number, number];
export const spectrumview_detuning: (a: number) => [number, number];
export const spectrumview_dips: (a: number) => [number, number];
export const spectrumview_peaks: (a: number) => [number, number];
export const spectrumview_reflectivity: (a: number) => [number, number];
export const spectrumview_transmissivity: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
