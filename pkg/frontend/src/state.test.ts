import { describe, expect, it } from 'vitest'

import { EngineClient } from './api.js'
import { SessionStore, type UiSessionState } from './state.js'
import type { MatricesDoc } from './types.js'

function matricesDoc(overrides: Partial<MatricesDoc> = {}): MatricesDoc {
    return {
        alpha: 0.5,
        history: { aspects: ['a', 'b'], entries: [0, 0], split: 1 },
        symptoms: { ids: ['s1'], grades: [0.0] },
        signs: { ids: ['g1'], grades: [0.0] },
        tests: { declared: ['t1'], grades: {} },
        unanswered: { history_aspects: ['a', 'b'], problems: [], signs: ['g1'], tests: ['t1'] },
        ...overrides,
    }
}

interface Route {
    method: string
    path: string
    status: number
    body: unknown
}

/** Scripted fetch: responses come only from this list, so any number the UI
 * ends up displaying is traceable to a canned server payload. */
function scriptedFetch(routes: Route[]) {
    const calls: { method: string; path: string; body: unknown }[] = []
    const impl = async (input: string, init?: RequestInit): Promise<Response> => {
        const method = init?.method ?? 'GET'
        calls.push({
            method,
            path: input,
            body: init?.body ? JSON.parse(String(init.body)) : undefined,
        })
        const route = routes.find((r) => r.method === method && input.endsWith(r.path))
        if (!route) throw new Error(`unscripted request: ${method} ${input}`)
        return new Response(JSON.stringify(route.body), {
            status: route.status,
            headers: { 'content-type': 'application/json' },
        })
    }
    return { impl, calls }
}

const baseRoutes: Route[] = [
    {
        method: 'POST',
        path: '/sessions',
        status: 201,
        body: { session_id: 'sid', revision: 0, matrices: matricesDoc() },
    },
    {
        method: 'GET',
        path: '/sessions/sid',
        status: 200,
        body: {
            session_id: 'sid',
            revision: 0,
            alpha: 0.5,
            record: {},
            matrices: matricesDoc(),
            prominent: { d1: ['x', 'y'] },
            audit: [],
        },
    },
]

async function startStore(extraRoutes: Route[] = []) {
    const { impl, calls } = scriptedFetch([...extraRoutes, ...baseRoutes])
    const store = new SessionStore(new EngineClient('http://engine', impl))
    await store.start()
    return { store, calls }
}

describe('SessionStore', () => {
    it('starts at revision 0 with the server matrices', async () => {
        const { store } = await startStore()
        expect(store.state.revision).toBe(0)
        expect(store.state.matrices.history.entries).toEqual([0, 0])
        expect(store.state.prominent).toEqual({ d1: ['x', 'y'] })
    })

    it('replaces matrices and revision together on a successful finding', async () => {
        const after = matricesDoc({ symptoms: { ids: ['s1'], grades: [0.37] } })
        const { store } = await startStore([
            {
                method: 'POST',
                path: '/sessions/sid/findings',
                status: 200,
                body: { revision: 1, matrices: after },
            },
        ])
        const seen: { revision: number; grade: number }[] = []
        store.subscribe((state: UiSessionState) => {
            seen.push({ revision: state.revision, grade: state.matrices.symptoms.grades[0] })
        })
        const ok = await store.submit({ kind: 'direct_history', aspect: 'a', value: 1 })
        expect(ok).toBe(true)
        expect(store.state.revision).toBe(1)
        // the displayed grade is exactly the server's number, never derived
        expect(store.state.matrices.symptoms.grades[0]).toBe(0.37)
        // no emission ever paired the new revision with the old matrices
        for (const snapshot of seen) {
            if (snapshot.revision === 1) expect(snapshot.grade).toBe(0.37)
            else expect(snapshot.grade).toBe(0.0)
        }
    })

    it('marks the finding pending while in flight and clears it after', async () => {
        const { store } = await startStore([
            {
                method: 'POST',
                path: '/sessions/sid/findings',
                status: 200,
                body: { revision: 1, matrices: matricesDoc() },
            },
        ])
        const pendingSeen: (string | null)[] = []
        store.subscribe((state) => pendingSeen.push(state.pending ? state.pending.kind : null))
        await store.submit({ kind: 'direct_history', aspect: 'a', value: 1 })
        expect(pendingSeen).toContain('direct_history')
        expect(store.state.pending).toBeNull()
    })

    it('keeps committed state unchanged on a validation error', async () => {
        const { store } = await startStore([
            {
                method: 'POST',
                path: '/sessions/sid/findings',
                status: 422,
                body: {
                    code: 'validation_error',
                    message: 'unknown history aspect',
                    path: 'direct_history.zzz',
                },
            },
        ])
        const before = { revision: store.state.revision, matrices: store.state.matrices }
        const ok = await store.submit({ kind: 'direct_history', aspect: 'zzz', value: 1 })
        expect(ok).toBe(false)
        expect(store.state.revision).toBe(before.revision)
        expect(store.state.matrices).toBe(before.matrices)
        expect(store.state.error).toContain('unknown history aspect')
        expect(store.state.pending).toBeNull()
    })

    it('revision is monotone over arbitrary outcomes', async () => {
        const after = matricesDoc()
        const { store } = await startStore([
            {
                method: 'POST',
                path: '/sessions/sid/findings',
                status: 200,
                body: { revision: 1, matrices: after },
            },
        ])
        const revisions: number[] = []
        store.subscribe((state) => revisions.push(state.revision))
        await store.submit({ kind: 'direct_history', aspect: 'a', value: 1 })
        await store.submit({ kind: 'direct_history', aspect: 'a', value: 1 })
        for (let i = 1; i < revisions.length; i++) {
            expect(revisions[i]).toBeGreaterThanOrEqual(revisions[i - 1])
        }
    })

    it('what-if preview stores the response without touching committed state', async () => {
        const previewDoc = matricesDoc({ alpha: 0.0 })
        const { store, calls } = await startStore([
            {
                method: 'GET',
                path: '/sessions/sid/preview?alpha=0',
                status: 200,
                body: { alpha: 0.0, revision: 0, matrices: previewDoc, prominent: { d1: ['x', 'y', 'z'] } },
            },
        ])
        const committedBefore = store.state.matrices
        const preview = await store.whatIfAlpha(0)
        expect(preview.prominent.d1).toEqual(['x', 'y', 'z'])
        expect(store.state.preview?.alpha).toBe(0)
        expect(store.state.matrices).toBe(committedBefore)
        expect(store.state.revision).toBe(0)
        // the preview endpoint is the only thing the slider touched
        expect(calls.filter((c) => c.method !== 'GET')).toHaveLength(1) // POST /sessions
        store.clearPreview()
        expect(store.state.preview).toBeNull()
    })

    it('committing alpha goes through PUT and clears the preview', async () => {
        const { store, calls } = await startStore([
            {
                method: 'GET',
                path: '/sessions/sid/preview?alpha=0.2',
                status: 200,
                body: { alpha: 0.2, revision: 0, matrices: matricesDoc(), prominent: {} },
            },
            {
                method: 'PUT',
                path: '/sessions/sid/alpha',
                status: 200,
                body: { revision: 1, matrices: matricesDoc({ alpha: 0.2 }) },
            },
        ])
        await store.whatIfAlpha(0.2)
        const ok = await store.commitAlpha(0.2)
        expect(ok).toBe(true)
        expect(store.state.preview).toBeNull()
        expect(store.state.alpha).toBe(0.2)
        expect(store.state.revision).toBe(1)
        expect(calls.some((c) => c.method === 'PUT')).toBe(true)
    })
})
