package tiny

import "github.com/gin-gonic/gin"

// Ping answers with a fixed body.
func Ping(c *gin.Context) {
	c.String(200, "pong")
}
