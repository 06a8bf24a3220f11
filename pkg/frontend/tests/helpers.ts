// Shared mock-fetch plumbing. Fixtures under tests/fixtures/ are verbatim
// captures of real service responses, so DOM tests assert against the
// same shapes the live API produces.

import type { FetchLike } from "../src/api";

export interface RecordedCall {
  url: string;
  init?: RequestInit;
}

export function fakeResponse(data: unknown, status = 200): Response {
  return {
    ok: status >= 200 && status < 300,
    status,
    json: async () => structuredClone(data),
  } as unknown as Response;
}

export function abortError(): DOMException {
  return new DOMException("The operation was aborted.", "AbortError");
}

export type Handler = (url: string, init?: RequestInit)
  => Response | Promise<Response>;

export function mockFetch(handler: Handler): {
  fn: FetchLike;
  calls: RecordedCall[];
} {
  const calls: RecordedCall[] = [];
  const fn: FetchLike = async (url, init) => {
    calls.push({ url, init });
    if (init?.signal?.aborted) throw abortError();
    return handler(url, init);
  };
  return { fn, calls };
}

/** A response the test resolves by hand; rejects with AbortError as soon
 * as the request's signal fires. */
export function deferred(signal: AbortSignal | null | undefined): {
  promise: Promise<Response>;
  resolve: (r: Response) => void;
} {
  let resolve!: (r: Response) => void;
  const promise = new Promise<Response>((res, rej) => {
    resolve = res;
    if (signal) {
      if (signal.aborted) rej(abortError());
      else signal.addEventListener("abort", () => rej(abortError()));
    }
  });
  return { promise, resolve };
}

export function requestBody(call: RecordedCall): Record<string, never> {
  return JSON.parse(String(call.init?.body ?? "{}"));
}

export function postCalls(calls: RecordedCall[]): RecordedCall[] {
  return calls.filter((c) => (c.init?.method ?? "GET") === "POST");
}
