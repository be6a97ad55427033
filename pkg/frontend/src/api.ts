import type {
    ErrorBody,
    Finding,
    FindingApplied,
    KbOverview,
    PreviewResponse,
    SessionCreated,
    SessionSummary,
} from './types.js'

export class ApiError extends Error {
    code: string
    path: string
    status: number
    fieldErrors: { path: string; message: string }[]

    constructor(status: number, body: ErrorBody) {
        super(body.message)
        this.status = status
        this.code = body.code
        this.path = body.path
        this.fieldErrors = body.errors ?? []
    }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>

/** Thin typed client over the engine's HTTP API. */
export class EngineClient {
    private fetchImpl: FetchLike

    constructor(
        readonly baseUrl: string = '',
        fetchImpl?: FetchLike,
    ) {
        this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init))
    }

    private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
        const init: RequestInit = { method, headers: { 'content-type': 'application/json' } }
        if (body !== undefined) {
            init.body = JSON.stringify(body)
        }
        let response: Response
        try {
            response = await this.fetchImpl(this.baseUrl + path, init)
        } catch (err) {
            throw new ApiError(0, {
                code: 'network_error',
                message: err instanceof Error ? err.message : String(err),
                path,
            })
        }
        const text = await response.text()
        if (!response.ok) {
            let parsed: ErrorBody
            try {
                parsed = JSON.parse(text) as ErrorBody
            } catch {
                parsed = { code: 'http_error', message: text || response.statusText, path }
            }
            throw new ApiError(response.status, parsed)
        }
        return JSON.parse(text) as T
    }

    kb(): Promise<KbOverview> {
        return this.request('GET', '/kb')
    }

    createSession(): Promise<SessionCreated> {
        return this.request('POST', '/sessions')
    }

    getSession(sessionId: string): Promise<SessionSummary> {
        return this.request('GET', `/sessions/${sessionId}`)
    }

    submitFinding(sessionId: string, finding: Finding): Promise<FindingApplied> {
        return this.request('POST', `/sessions/${sessionId}/findings`, finding)
    }

    putAlpha(sessionId: string, alpha: number | null): Promise<FindingApplied> {
        return this.request('PUT', `/sessions/${sessionId}/alpha`, { alpha })
    }

    preview(sessionId: string, alpha: number): Promise<PreviewResponse> {
        return this.request('GET', `/sessions/${sessionId}/preview?alpha=${alpha}`)
    }

    report(sessionId: string, format: 'structured' | 'text'): Promise<string> {
        const path = `/sessions/${sessionId}/report?format=${format}`
        return this.fetchImpl(this.baseUrl + path, { method: 'GET' }).then(async (response) => {
            if (!response.ok) {
                throw new ApiError(response.status, {
                    code: 'http_error',
                    message: response.statusText,
                    path,
                })
            }
            return response.text()
        })
    }
}
