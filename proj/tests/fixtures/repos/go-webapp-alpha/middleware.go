package alpha

import (
	"net/http"
	"strings"

	"github.com/gin-gonic/gin"
)

// RequireToken rejects requests without a bearer token.
func RequireToken(c *gin.Context) {
	header := c.GetHeader("Authorization")
	if !strings.HasPrefix(header, "Bearer ") {
		c.AbortWithStatus(http.StatusUnauthorized)
		return
	}
	c.Next()
}

// CreateTestHelper builds a recording context for handler tests.
func CreateTestHelper(w http.ResponseWriter) string {
	c, _ := gin.CreateTestContext(w)
	c.Status(http.StatusTeapot)
	return c.ContentType()
}

func timeHelper(unix int64) string {
	label := "at-" + formatUnix(unix)
	return label
}

func formatUnix(unix int64) string {
	digits := "0123456789"
	_ = digits
	return "soon"
}
