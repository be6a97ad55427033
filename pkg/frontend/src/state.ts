// Session state: one store per live intake session. The displayed matrices
// and revision are always replaced together, atomically from one engine
// response; a failed submission leaves the committed state untouched.

import { ApiError, EngineClient } from './api.js'
import type { Finding, MatricesDoc, PreviewResponse } from './types.js'

export interface UiSessionState {
    sessionId: string
    revision: number
    alpha: number
    matrices: MatricesDoc
    prominent: Record<string, string[]>
    pending: Finding | null
    error: string | null
    /** the finding the engine rejected, for inline form highlighting */
    errorFinding: Finding | null
    /** uncommitted what-if result; cleared on commit or dismissal */
    preview: PreviewResponse | null
}

type Listener = (state: UiSessionState) => void

export class SessionStore {
    private current: UiSessionState | null = null
    private listeners: Listener[] = []
    private chain: Promise<unknown> = Promise.resolve()

    constructor(readonly client: EngineClient) {}

    get state(): UiSessionState {
        if (!this.current) throw new Error('session not started')
        return this.current
    }

    subscribe(listener: Listener): () => void {
        this.listeners.push(listener)
        return () => {
            this.listeners = this.listeners.filter((l) => l !== listener)
        }
    }

    private emit(): void {
        if (!this.current) return
        for (const listener of this.listeners) listener(this.current)
    }

    async start(): Promise<UiSessionState> {
        const created = await this.client.createSession()
        const summary = await this.client.getSession(created.session_id)
        this.current = {
            sessionId: summary.session_id,
            revision: summary.revision,
            alpha: summary.alpha,
            matrices: summary.matrices,
            prominent: summary.prominent,
            pending: null,
            error: null,
            errorFinding: null,
            preview: null,
        }
        this.emit()
        return this.current
    }

    /** Serialize our own requests: one in flight per session. */
    private enqueue<T>(task: () => Promise<T>): Promise<T> {
        const next = this.chain.then(task, task)
        this.chain = next.catch(() => undefined)
        return next
    }

    submit(finding: Finding): Promise<boolean> {
        return this.enqueue(async () => {
            const state = this.state
            state.pending = finding
            state.error = null
            state.errorFinding = null
            this.emit()
            try {
                const applied = await this.client.submitFinding(state.sessionId, finding)
                // revision and matrices swap in one step: what is displayed
                // always corresponds to the displayed revision
                state.revision = applied.revision
                state.matrices = applied.matrices
                state.alpha = applied.matrices.alpha
                state.pending = null
                if (finding.kind === 'alpha_override') {
                    state.prominent = (await this.client.getSession(state.sessionId)).prominent
                }
                this.emit()
                return true
            } catch (err) {
                state.pending = null
                state.error = err instanceof Error ? err.message : String(err)
                state.errorFinding = finding
                this.emit()
                if (err instanceof ApiError && (err.status === 0 || err.status >= 500)) {
                    // reconcile in case the server state moved without us
                    await this.refresh().catch(() => undefined)
                }
                return false
            }
        })
    }

    /** What-if evaluation at a hypothetical threshold; commits nothing. */
    whatIfAlpha(alpha: number): Promise<PreviewResponse> {
        return this.enqueue(async () => {
            const state = this.state
            const preview = await this.client.preview(state.sessionId, alpha)
            state.preview = preview
            this.emit()
            return preview
        })
    }

    commitAlpha(alpha: number | null): Promise<boolean> {
        return this.enqueue(async () => {
            const state = this.state
            try {
                const applied = await this.client.putAlpha(state.sessionId, alpha)
                state.revision = applied.revision
                state.matrices = applied.matrices
                state.alpha = applied.matrices.alpha
                state.prominent = (await this.client.getSession(state.sessionId)).prominent
                state.preview = null
                state.error = null
                this.emit()
                return true
            } catch (err) {
                state.error = err instanceof Error ? err.message : String(err)
                this.emit()
                return false
            }
        })
    }

    clearPreview(): void {
        const state = this.state
        state.preview = null
        this.emit()
    }

    async refresh(): Promise<void> {
        const state = this.state
        const summary = await this.client.getSession(state.sessionId)
        if (summary.revision >= state.revision) {
            state.revision = summary.revision
            state.matrices = summary.matrices
            state.alpha = summary.alpha
            state.prominent = summary.prominent
            this.emit()
        }
    }
}
