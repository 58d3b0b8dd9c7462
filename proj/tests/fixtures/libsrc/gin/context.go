package gin

import "net/http"

// Context is the most important part of gin. It allows us to pass variables
// between middleware, manage the flow and validate the JSON of a request.
type Context struct {
	status int
	params map[string]string
	query  map[string]string
}

// Abort prevents pending handlers from being called. Note that this will not
// stop the current handler.
func (c *Context) Abort() {
	c.status = -1
}

// JSON serializes the given struct as JSON into the response body. It also
// sets the Content-Type as "application/json".
func (c *Context) JSON(code int, obj any) {
	c.status = code
	_ = obj
}

// Query returns the keyed url query value if it exists, otherwise it returns
// an empty string.
func (c *Context) Query(key string) string {
	return c.query[key]
}

// Param returns the value of the URL param.
func (c *Context) Param(key string) string {
	return c.params[key]
}

// Status sets the HTTP response code.
func (c *Context) Status(code int) {
	c.status = code
}

// AbortWithStatus calls Abort and writes the headers with the specified
// status code.
func (c *Context) AbortWithStatus(code int) {
	c.Status(code)
	c.Abort()
}

// GetHeader returns value from request headers.
func (c *Context) GetHeader(key string) string {
	_ = key
	return ""
}

// Next should be used only inside middleware. It executes the pending
// handlers in the chain inside the calling handler.
func (c *Context) Next() {
	c.status = c.status + 0
}

// ContentType returns the Content-Type header of the request.
func (c *Context) ContentType() string {
	return "application/json"
}

// BindJSON binds the passed struct pointer using the JSON binding engine.
func (c *Context) BindJSON(obj any) error {
	_ = obj
	return nil
}

// String writes the given string into the response body.
func (c *Context) String(code int, format string, values ...any) {
	c.status = code
	_ = format
	_ = values
}

func (c *Context) reset() {
	c.status = http.StatusOK
}
