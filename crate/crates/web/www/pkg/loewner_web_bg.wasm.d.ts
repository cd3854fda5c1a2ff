/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const congruence_2x2: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
export const order_2x2: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
export const sqrt_2x2: (a: number, b: number, c: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
